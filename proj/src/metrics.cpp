#include "seisreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "seisreg/error.hpp"
#include "seisreg/spectrum.hpp"

namespace seisreg {

Psd psd(const TimeSeries& series) {
  const std::size_t n = series.size();
  if (n < 4) throw Error(ErrorKind::TooShort, "PSD needs at least 4 samples");
  double mean = 0.0;
  for (double v : series.values) mean += v;
  mean /= static_cast<double>(n);
  // a constant series must give exactly zero power, not rounding residue
  const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
  if (*lo == *hi) mean = *lo;
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = series.values[i] - mean;
  const auto X = dft(x);

  const double fs = series.fs_hz();
  const std::size_t half = n / 2;
  Psd out;
  out.freqs_hz.resize(half + 1);
  out.power.resize(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    double p = std::norm(X[k]) / (static_cast<double>(n) * fs);
    const bool unpaired = k == 0 || (n % 2 == 0 && k == half);
    if (!unpaired) p *= 2.0;
    out.freqs_hz[k] = static_cast<double>(k) * fs / static_cast<double>(n);
    out.power[k] = p;
  }
  return out;
}

double spectral_entropy(std::span<const double> power) {
  double total = 0.0;
  for (double p : power) total += p;
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroPower, "total power is zero");
  double h = 0.0;
  for (double p : power) {
    if (p <= 0.0) continue;
    const double q = p / total;
    h -= q * std::log2(q);
  }
  return h;
}

double spectral_entropy(const Psd& p) { return spectral_entropy(p.power); }

double series_entropy(const TimeSeries& series) { return spectral_entropy(psd(series)); }

namespace {

std::vector<int> bin_indices(std::span<const double> x, int bins) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = *mn, width = *mx - *mn;
  std::vector<int> idx(x.size(), 0);
  if (!(width > 0.0)) return idx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int b = static_cast<int>(std::floor((x[i] - lo) / width * bins));
    idx[i] = std::clamp(b, 0, bins - 1);
  }
  return idx;
}

double entropy_of_counts(std::span<const std::size_t> counts, std::size_t n) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

void check_pair(std::span<const double> x, std::span<const double> y, int bins) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::LengthMismatch, "series lengths " + std::to_string(x.size()) + " and " +
                                               std::to_string(y.size()) + " differ");
  }
  if (x.empty()) throw Error(ErrorKind::TooShort, "empty series");
  if (bins < 2) throw Error(ErrorKind::InvalidParameter, "need at least 2 bins");
}

struct Entropies {
  double hx, hy, hxy;
};

Entropies joint_entropies(std::span<const double> x, std::span<const double> y, int bins) {
  check_pair(x, y, bins);
  const auto bx = bin_indices(x, bins);
  const auto by = bin_indices(y, bins);
  const auto nb = static_cast<std::size_t>(bins);
  std::vector<std::size_t> cx(nb, 0), cy(nb, 0), cxy(nb * nb, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++cx[static_cast<std::size_t>(bx[i])];
    ++cy[static_cast<std::size_t>(by[i])];
    ++cxy[static_cast<std::size_t>(bx[i]) * nb + static_cast<std::size_t>(by[i])];
  }
  return {entropy_of_counts(cx, x.size()), entropy_of_counts(cy, x.size()),
          entropy_of_counts(cxy, x.size())};
}

}  // namespace

double binned_entropy(std::span<const double> x, int bins) {
  if (x.empty()) throw Error(ErrorKind::TooShort, "empty series");
  if (bins < 2) throw Error(ErrorKind::InvalidParameter, "need at least 2 bins");
  const auto bx = bin_indices(x, bins);
  std::vector<std::size_t> c(static_cast<std::size_t>(bins), 0);
  for (int b : bx) ++c[static_cast<std::size_t>(b)];
  return entropy_of_counts(c, x.size());
}

double mutual_information(std::span<const double> x, std::span<const double> y, int bins) {
  const auto e = joint_entropies(x, y, bins);
  return e.hx + e.hy - e.hxy;
}

double nmi(std::span<const double> x, std::span<const double> y, int bins) {
  const auto e = joint_entropies(x, y, bins);
  const double hmin = std::min(e.hx, e.hy);
  if (!(hmin > 0.0)) {
    throw Error(ErrorKind::DegenerateMarginal, "a marginal histogram has zero entropy");
  }
  return (e.hx + e.hy - e.hxy) / hmin;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "pearson: length mismatch");
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

MetricsReport evaluate(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) {
    throw Error(ErrorKind::LengthMismatch, "predicted/actual length mismatch");
  }
  if (actual.size() < 2) throw Error(ErrorKind::TooShort, "need at least 2 samples");
  const auto n = static_cast<double>(actual.size());

  double mean_actual = 0.0;
  for (double v : actual) mean_actual += v;
  mean_actual /= n;
  if (std::all_of(actual.begin(), actual.end(), [&](double v) { return v == actual[0]; })) {
    throw Error(ErrorKind::ConstantActual, "actual series is constant; CC undefined");
  }

  MetricsReport r;
  double se = 0.0, ae = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    se += e * e;
    ae += std::abs(e);
  }
  r.rmse = std::sqrt(se / n);
  r.aem = ae / n;
  r.cc = pearson(predicted, actual);
  r.cc_defined = !std::isnan(r.cc);
  if (mean_actual == 0.0) {
    r.si = std::numeric_limits<double>::quiet_NaN();
    r.si_defined = false;
  } else {
    r.si = r.rmse / mean_actual;
  }
  return r;
}

}  // namespace seisreg
