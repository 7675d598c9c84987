#pragma once

#include <optional>

#include "seisreg/series.hpp"
#include "seisreg/spectrum.hpp"

namespace seisreg {

struct FtRegParams {
  double zeta_max_hz = 0.0;
  double entropy_tolerance = 0.05;  // bits
};

struct GateVerdict {
  double original_entropy = 0.0;
  double regularized_entropy = 0.0;
  double predictor_entropy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Passes iff H(regularized) <= H(predictor) + tol and H(regularized) < H(original),
/// all entropies from the PSD of each series.
GateVerdict entropy_gate(const TimeSeries& original, const TimeSeries& regularized,
                         const TimeSeries& predictor, double tol_bits);

/// Common bookkeeping returned by the three regularizers.
struct RegReport {
  double entropy_before = 0.0;
  double entropy_after = 0.0;
  std::optional<GateVerdict> gate;  // present when a predictor was supplied
};

struct FtRegReport : RegReport {
  double zeta_max_hz = 0.0;
  std::size_t retained_bins = 0;
  double imag_rms = 0.0;
};

struct FtRegResult {
  TimeSeries series;
  FtRegReport report;
};

/// Zeroes every bin with |f| > zeta_max (a bin at exactly zeta_max is kept),
/// inverts, and keeps the real part. Throws BandTooNarrow below 3 retained bins.
FtRegResult regularize_ft(const TimeSeries& target, const FtRegParams& params,
                          const TimeSeries* predictor = nullptr);

/// Frequency below which 99% of the predictor's one-sided PSD lies, widened by 25%.
double default_zeta_max(const TimeSeries& predictor, double fraction = 0.99, double widen = 1.25);

}  // namespace seisreg
