#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seisreg/ftreg.hpp"
#include "seisreg/series.hpp"

namespace seisreg {

/// Orthogonal wavelet filter bank. Analysis lowpass H, highpass
/// G[k] = (-1)^k H[L-1-k]; synthesis filters are their time reverses.
struct WaveletSpec {
  std::string name;
  std::vector<double> dec_lo;
  std::vector<double> dec_hi;
  std::vector<double> rec_lo;
  std::vector<double> rec_hi;

  std::size_t length() const { return dec_lo.size(); }
};

/// Looks up one of {haar, db2, db4, db8}. Each table
/// is checked against the orthonormality conditions on first use.
const WaveletSpec& wavelet(std::string_view name);
std::vector<std::string> wavelet_names();

enum class BoundaryMode { symmetric, periodic };

std::string_view to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(std::string_view s);

struct WaveletCoeffs {
  std::string wavelet;
  BoundaryMode boundary_mode = BoundaryMode::symmetric;
  int levels = 0;
  std::size_t original_length = 0;
  std::vector<std::size_t> input_lengths;  // length entering level 1..l
  std::vector<double> approx;              // a_l
  std::vector<std::vector<double>> details;  // d_1 (finest) .. d_l (coarsest)
};

/// Filter-bank analysis: per level extend, convolve with H and G, keep every
/// second output. Level index grows toward coarser scales.
WaveletCoeffs dwt(std::span<const double> x, const WaveletSpec& spec, int levels,
                  BoundaryMode mode = BoundaryMode::symmetric);

/// Upsample, convolve with the synthesis pair, sum; repeats to level 0.
std::vector<double> idwt(const WaveletCoeffs& coeffs, const WaveletSpec& spec);

/// Output length of one symmetric-mode analysis level.
std::size_t dwt_output_length(std::size_t n, std::size_t filter_length, BoundaryMode mode);

struct WdParams {
  std::string wavelet = "db4";
  int levels = 6;
  std::vector<int> truncate_details;  // 1-based levels; empty list = keep all
  BoundaryMode mode = BoundaryMode::symmetric;
  double entropy_tolerance = 0.05;

  /// {1, ..., levels - 1}
  static std::vector<int> default_truncation(int levels);
};

struct WdRegReport : RegReport {
  std::vector<int> truncated;
  std::vector<double> removed_detail_energy;  // ||d_i||^2 for each truncated level
};

struct WdRegResult {
  TimeSeries series;
  WdRegReport report;
};

WdRegResult regularize_wd(const TimeSeries& series, const WdParams& params,
                          const TimeSeries* predictor = nullptr);

}  // namespace seisreg
