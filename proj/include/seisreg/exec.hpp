#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace seisreg {

/// Selects between the OpenMP kernel and the serial reference it is tested against.
enum class Exec { serial, parallel };

/// Runs body(i) for i in [0, n). The parallel path uses a static schedule, so
/// per-index results never depend on the thread count.
template <typename Body>
void for_each_index(Exec exec, std::ptrdiff_t n, Body&& body) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace seisreg
