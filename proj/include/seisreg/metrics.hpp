#pragma once

#include <span>
#include <vector>

#include "seisreg/series.hpp"

namespace seisreg {

/// One-sided periodogram over bins 0..floor(N/2).
struct Psd {
  std::vector<double> freqs_hz;
  std::vector<double> power;
};

/// Mean removed, |X(k)|^2 / (N fs), interior bins doubled so that
/// sum(power) * fs / N equals the population variance.
Psd psd(const TimeSeries& series);

/// Shannon entropy in bits of the power normalized to a probability vector.
double spectral_entropy(const Psd& psd);
double spectral_entropy(std::span<const double> power);

/// Convenience: spectral_entropy(psd(series)).
double series_entropy(const TimeSeries& series);

constexpr int kDefaultMiBins = 16;

/// Entropy in bits of an equal-width histogram over the observed range.
double binned_entropy(std::span<const double> x, int bins = kDefaultMiBins);

/// I = H(X) + H(Y) - H(X,Y) from a bins x bins equal-width joint histogram.
double mutual_information(std::span<const double> x, std::span<const double> y,
                          int bins = kDefaultMiBins);

/// I(X;Y) / min(H(X), H(Y)) with marginals from the same histograms.
double nmi(std::span<const double> x, std::span<const double> y, int bins = kDefaultMiBins);

struct MetricsReport {
  double cc = 0.0;    // Pearson, population moments
  double rmse = 0.0;
  double aem = 0.0;   // mean absolute error
  double si = 0.0;    // rmse / mean(actual)
  bool cc_defined = true;  // false when the prediction is constant
  bool si_defined = true;  // false when mean(actual) == 0
};

/// Throws ConstantActual when `actual` has zero variance.
MetricsReport evaluate(std::span<const double> predicted, std::span<const double> actual);

/// Pearson correlation; NaN when either side is constant.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace seisreg
