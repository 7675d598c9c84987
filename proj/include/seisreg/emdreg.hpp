#pragma once

#include <span>
#include <vector>

#include "seisreg/ftreg.hpp"
#include "seisreg/series.hpp"

namespace seisreg {

struct SiftParams {
  double sd_threshold = 0.2;  // Cauchy-type: sum (h_prev - h)^2 / sum h_prev^2
  int max_sift_iters = 50;
  int max_imfs = 16;

  void validate() const;
};

/// imfs[0] is the highest-frequency mode. sum(imfs) + residue == input.
struct ImfSet {
  std::vector<TimeSeries> imfs;
  TimeSeries residue;
};

struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

/// Strict 3-point extrema; a flat plateau bounded by a strict rise and fall
/// contributes its midpoint (rounded down) once. End samples never count.
Extrema find_extrema(std::span<const double> x);

/// Sign changes, skipping exact zeros.
std::size_t count_zero_crossings(std::span<const double> x);

/// |#extrema - #zero crossings| <= 1
bool is_imf(std::span<const double> x);

/// Mean of the natural cubic spline envelopes through the maxima and minima,
/// with the two extrema nearest each end mirrored across that end.
/// Needs at least 2 maxima and 2 minima.
std::vector<double> envelope_mean(std::span<const double> x);
TimeSeries envelope_mean(const TimeSeries& series);

/// Natural cubic spline through (xs, ys), evaluated at integer positions 0..n-1.
std::vector<double> natural_spline_on_grid(std::span<const double> xs, std::span<const double> ys,
                                           std::size_t n);

ImfSet emd(const TimeSeries& series, const SiftParams& params = {});

struct EmdRegReport : RegReport {
  std::size_t imf_count = 0;
  int p1 = 0;
};

struct EmdRegResult {
  TimeSeries series;
  EmdRegReport report;
};

/// Removes the first p1 IMFs: output = input - sum_{i<=p1} imf_i.
EmdRegResult regularize_emd(const TimeSeries& series, const SiftParams& params, int p1,
                            const TimeSeries* predictor = nullptr, double tol_bits = 0.05);

}  // namespace seisreg
