#pragma once

#include <cstddef>
#include <vector>

namespace seisreg {

/// Uniformly sampled series on a time axis in milliseconds.
struct TimeSeries {
  double t0_ms = 0.0;
  double dt_ms = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t i) const { return t0_ms + dt_ms * static_cast<double>(i); }
  double end_ms() const { return values.empty() ? t0_ms : time_at(values.size() - 1); }
  double fs_hz() const { return 1000.0 / dt_ms; }
};

}  // namespace seisreg
