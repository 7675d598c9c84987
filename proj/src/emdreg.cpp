#include "seisreg/emdreg.hpp"

#include <algorithm>
#include <cmath>

#include "seisreg/error.hpp"
#include "seisreg/metrics.hpp"

namespace seisreg {

void SiftParams::validate() const {
  if (!(sd_threshold > 0.0 && sd_threshold < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "sd_threshold must lie in (0, 1)");
  }
  if (max_sift_iters < 1) throw Error(ErrorKind::InvalidParameter, "max_sift_iters must be >= 1");
  if (max_imfs < 1) throw Error(ErrorKind::InvalidParameter, "max_imfs must be >= 1");
}

Extrema find_extrema(std::span<const double> x) {
  Extrema e;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (x[i] == x[i - 1]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (j + 1 < n) {
      const bool rose = x[i] > x[i - 1];
      const bool falls = x[j + 1] < x[j];
      if (rose && falls) e.maxima.push_back((i + j) / 2);
      if (!rose && !falls) e.minima.push_back((i + j) / 2);
    }
    i = j + 1;
  }
  return e;
}

std::size_t count_zero_crossings(std::span<const double> x) {
  std::size_t count = 0;
  int prev = 0;
  for (double v : x) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

bool is_imf(std::span<const double> x) {
  const auto e = find_extrema(x);
  const auto n_ext = static_cast<long long>(e.maxima.size() + e.minima.size());
  const auto n_zc = static_cast<long long>(count_zero_crossings(x));
  return std::llabs(n_ext - n_zc) <= 1;
}

std::vector<double> natural_spline_on_grid(std::span<const double> xs, std::span<const double> ys,
                                           std::size_t n) {
  const std::size_t k = xs.size();
  std::vector<double> out(n);
  if (k == 0) return out;
  if (k == 1) {
    std::fill(out.begin(), out.end(), ys[0]);
    return out;
  }
  // second derivatives M with M_0 = M_{k-1} = 0 (tridiagonal, Thomas algorithm)
  std::vector<double> m(k, 0.0);
  if (k > 2) {
    const std::size_t interior = k - 2;
    std::vector<double> diag(interior), upper(interior), rhs(interior);
    for (std::size_t i = 1; i + 1 < k; ++i) {
      const double h0 = xs[i] - xs[i - 1], h1 = xs[i + 1] - xs[i];
      diag[i - 1] = 2.0 * (h0 + h1);
      upper[i - 1] = h1;
      rhs[i - 1] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
    }
    // sub-diagonal of row r is h_{r} = xs[r+1]-xs[r] (for r >= 1)
    for (std::size_t r = 1; r < interior; ++r) {
      const double sub = xs[r + 1] - xs[r];
      const double w = sub / diag[r - 1];
      diag[r] -= w * upper[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    m[interior] = rhs[interior - 1] / diag[interior - 1];
    for (std::size_t r = interior - 1; r-- > 0;) {
      m[r + 1] = (rhs[r] - upper[r] * m[r + 2]) / diag[r];
    }
  }

  std::size_t seg = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double x = static_cast<double>(t);
    while (seg + 2 < k && xs[seg + 1] < x) ++seg;
    const double h = xs[seg + 1] - xs[seg];
    const double a = (xs[seg + 1] - x) / h;
    const double b = (x - xs[seg]) / h;
    out[t] = a * ys[seg] + b * ys[seg + 1] +
             ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * h * h / 6.0;
  }
  return out;
}

namespace {

std::vector<double> envelope(std::span<const double> x, const std::vector<std::size_t>& idx) {
  const std::size_t n = x.size();
  const double last = static_cast<double>(n - 1);
  std::vector<double> xs, ys;
  // mirror the two extrema nearest each end across that end sample
  for (std::size_t q = std::min<std::size_t>(2, idx.size()); q-- > 0;) {
    xs.push_back(-static_cast<double>(idx[q]));
    ys.push_back(x[idx[q]]);
  }
  for (std::size_t i : idx) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(x[i]);
  }
  const std::size_t first_tail = idx.size() >= 2 ? idx.size() - 2 : 0;
  for (std::size_t q = idx.size(); q-- > first_tail;) {
    xs.push_back(2.0 * last - static_cast<double>(idx[q]));
    ys.push_back(x[idx[q]]);
  }
  return natural_spline_on_grid(xs, ys, n);
}

}  // namespace

std::vector<double> envelope_mean(std::span<const double> x) {
  const auto e = find_extrema(x);
  if (e.maxima.size() < 2 || e.minima.size() < 2) {
    throw Error(ErrorKind::TooFewExtrema, std::to_string(e.maxima.size()) + " maxima and " +
                                              std::to_string(e.minima.size()) +
                                              " minima; need 2 of each");
  }
  const auto upper = envelope(x, e.maxima);
  const auto lower = envelope(x, e.minima);
  std::vector<double> m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = 0.5 * (upper[i] + lower[i]);
  return m;
}

TimeSeries envelope_mean(const TimeSeries& series) {
  return TimeSeries{series.t0_ms, series.dt_ms, envelope_mean(std::span(series.values))};
}

ImfSet emd(const TimeSeries& series, const SiftParams& params) {
  params.validate();
  if (series.size() < 16) throw Error(ErrorKind::TooShort, "EMD needs at least 16 samples");

  ImfSet out;
  std::vector<double> residue = series.values;
  while (static_cast<int>(out.imfs.size()) < params.max_imfs) {
    const auto ext = find_extrema(residue);
    if (ext.maxima.size() < 2 || ext.minima.size() < 2) break;

    std::vector<double> h = residue;
    bool extracted = false;
    for (int j = 1; j <= params.max_sift_iters; ++j) {
      std::vector<double> mean;
      try {
        mean = envelope_mean(std::span<const double>(h));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::TooFewExtrema) throw;
        extracted = j > 1;  // h already sifted at least once: accept it
        break;
      }
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        num += mean[i] * mean[i];
        den += h[i] * h[i];
        h[i] -= mean[i];
      }
      extracted = true;
      const double sd = den > 0.0 ? num / den : 0.0;
      if (sd < params.sd_threshold && is_imf(h)) break;
    }
    if (!extracted) break;

    for (std::size_t i = 0; i < residue.size(); ++i) residue[i] -= h[i];
    out.imfs.push_back(TimeSeries{series.t0_ms, series.dt_ms, std::move(h)});
  }
  out.residue = TimeSeries{series.t0_ms, series.dt_ms, std::move(residue)};
  return out;
}

EmdRegResult regularize_emd(const TimeSeries& series, const SiftParams& params, int p1,
                            const TimeSeries* predictor, double tol_bits) {
  const ImfSet set = emd(series, params);
  const auto n_imfs = static_cast<int>(set.imfs.size());
  if (p1 < 1 || p1 >= n_imfs) {
    throw Error(ErrorKind::P1OutOfRange, "p1 = " + std::to_string(p1) + " with " +
                                             std::to_string(n_imfs) +
                                             " IMF(s); need 1 <= p1 < #IMFs");
  }
  EmdRegResult res;
  res.series = series;
  for (int i = 0; i < p1; ++i) {
    const auto& imf = set.imfs[static_cast<std::size_t>(i)].values;
    for (std::size_t t = 0; t < imf.size(); ++t) res.series.values[t] -= imf[t];
  }
  res.report.imf_count = set.imfs.size();
  res.report.p1 = p1;
  res.report.entropy_before = series_entropy(series);
  res.report.entropy_after = series_entropy(res.series);
  if (predictor) res.report.gate = entropy_gate(series, res.series, *predictor, tol_bits);
  return res;
}

}  // namespace seisreg
