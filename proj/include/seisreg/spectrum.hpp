#pragma once

#include <complex>
#include <span>
#include <vector>

#include "seisreg/series.hpp"

namespace seisreg {

/// Full (two-sided) DFT coefficients X(k), k = 0..N-1, with the sampling
/// rate needed to map bins to physical frequencies.
struct Spectrum {
  std::vector<std::complex<double>> coeffs;
  double fs_hz = 1.0;

  std::size_t size() const { return coeffs.size(); }
  /// Signed frequency of bin k: k*fs/N for k <= N/2, (k-N)*fs/N above.
  double bin_frequency(std::size_t k) const;
};

/// X(k) = sum_j x(j) exp(-2 pi i j k / N). Any N >= 1.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x);
/// x(j) = (1/N) sum_k X(k) exp(+2 pi i j k / N).
std::vector<std::complex<double>> idft(std::span<const std::complex<double>> X);

Spectrum dft(const TimeSeries& series);
std::vector<std::complex<double>> idft(const Spectrum& spectrum);

}  // namespace seisreg
