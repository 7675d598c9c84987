#include "seisreg/waveletreg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "seisreg/error.hpp"
#include "seisreg/metrics.hpp"

namespace seisreg {

namespace {

// Analysis lowpass filters of the minimum-phase Daubechies family (dbN has 2N taps),
// in convolution order.
const std::map<std::string, std::vector<double>, std::less<>>& filter_tables() {
  static const std::map<std::string, std::vector<double>, std::less<>> tables = {
      {"haar", {0.7071067811865476, 0.7071067811865476}},
      {"db2",
       {-0.12940952255126037, 0.2241438680420134, 0.8365163037378079, 0.48296291314453416}},
      {"db4",
       {-0.010597401785069032, 0.0328830116668852, 0.030841381835560764, -0.18703481171909309,
        -0.027983769416859854, 0.6308807679298589, 0.7148465705529157, 0.2303778133088965}},
      {"db8",
       {-0.00011747678412476953, 0.0006754494064505693, -0.00039174037337694705,
        -0.004870352993451574, 0.008746094047405777, 0.013981027917398282,
        -0.044088253930794755, -0.017369301001807547, 0.12874742662047847,
        0.0004724845739132828, -0.2840155429615469, -0.015829105256349306,
        0.5853546836542067, 0.6756307362972898, 0.31287159091429995, 0.05441584224310401}},
  };
  return tables;
}

WaveletSpec build_spec(std::string name, const std::vector<double>& h) {
  const std::size_t L = h.size();
  double sum = 0.0;
  for (double v : h) sum += v;
  if (std::abs(sum - std::sqrt(2.0)) > 1e-12) {
    throw Error(ErrorKind::UnknownWavelet, name + ": lowpass taps do not sum to sqrt(2)");
  }
  for (std::size_t m = 0; 2 * m < L; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 2 * m < L; ++k) acc += h[k] * h[k + 2 * m];
    if (std::abs(acc - (m == 0 ? 1.0 : 0.0)) > 1e-10) {
      throw Error(ErrorKind::UnknownWavelet, name + ": lowpass taps are not orthonormal");
    }
  }

  WaveletSpec s;
  s.name = std::move(name);
  s.dec_lo = h;
  s.dec_hi.resize(L);
  for (std::size_t k = 0; k < L; ++k) s.dec_hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - k];
  s.rec_lo.assign(s.dec_lo.rbegin(), s.dec_lo.rend());
  s.rec_hi.assign(s.dec_hi.rbegin(), s.dec_hi.rend());
  return s;
}

// Half-point symmetric extension, valid for any index (signals shorter than the filter reflect
// repeatedly).
std::size_t reflect(long long m, std::size_t n) {
  const auto period = static_cast<long long>(2 * n);
  long long r = m % period;
  if (r < 0) r += period;
  const auto ur = static_cast<std::size_t>(r);
  return ur < n ? ur : 2 * n - 1 - ur;
}

std::size_t wrap(long long m, std::size_t n) {
  const auto nn = static_cast<long long>(n);
  long long r = m % nn;
  if (r < 0) r += nn;
  return static_cast<std::size_t>(r);
}

void analysis_step(std::span<const double> x, const WaveletSpec& spec, BoundaryMode mode,
                   std::vector<double>& approx, std::vector<double>& detail) {
  const std::size_t n = x.size();
  const std::size_t L = spec.length();
  const std::size_t m = dwt_output_length(n, L, mode);
  approx.assign(m, 0.0);
  detail.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      const long long src = static_cast<long long>(2 * i + 1) - static_cast<long long>(j);
      const double v = x[mode == BoundaryMode::symmetric ? reflect(src, n) : wrap(src, n)];
      a += spec.dec_lo[j] * v;
      d += spec.dec_hi[j] * v;
    }
    approx[i] = a;
    detail[i] = d;
  }
}

// Adjoint of analysis_step restricted to the n output samples; for an orthonormal bank
// this is its exact inverse.
std::vector<double> synthesis_step(std::span<const double> approx, std::span<const double> detail,
                                   const WaveletSpec& spec, BoundaryMode mode, std::size_t n) {
  const std::size_t L = spec.length();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < approx.size(); ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      // rec_lo[L-1-j] == dec_lo[j]: upsampled coefficient i lands on 2i+1 and the synthesis
      // filter spreads it backward over its support.
      const long long t = static_cast<long long>(2 * i + 1) - static_cast<long long>(j);
      const double contrib =
          spec.rec_lo[L - 1 - j] * approx[i] + spec.rec_hi[L - 1 - j] * detail[i];
      if (mode == BoundaryMode::periodic) {
        x[wrap(t, n)] += contrib;
      } else if (t >= 0 && t < static_cast<long long>(n)) {
        x[static_cast<std::size_t>(t)] += contrib;
      }
    }
  }
  return x;
}

}  // namespace

const WaveletSpec& wavelet(std::string_view name) {
  static std::mutex mu;
  static std::map<std::string, WaveletSpec, std::less<>> built;
  std::lock_guard lock(mu);
  if (auto it = built.find(name); it != built.end()) return it->second;
  const auto& tables = filter_tables();
  auto t = tables.find(name);
  if (t == tables.end()) {
    throw Error(ErrorKind::UnknownWavelet, "unknown wavelet '" + std::string(name) + "'");
  }
  auto [it, _] = built.emplace(std::string(name), build_spec(std::string(name), t->second));
  return it->second;
}

std::vector<std::string> wavelet_names() {
  std::vector<std::string> names;
  for (const auto& [k, _] : filter_tables()) names.push_back(k);
  return names;
}

std::string_view to_string(BoundaryMode mode) {
  return mode == BoundaryMode::symmetric ? "symmetric" : "periodic";
}

BoundaryMode boundary_mode_from_string(std::string_view s) {
  if (s == "symmetric") return BoundaryMode::symmetric;
  if (s == "periodic") return BoundaryMode::periodic;
  throw Error(ErrorKind::InvalidParameter, "unknown boundary mode '" + std::string(s) + "'");
}

std::size_t dwt_output_length(std::size_t n, std::size_t filter_length, BoundaryMode mode) {
  return mode == BoundaryMode::symmetric ? (n + filter_length - 1) / 2 : n / 2;
}

WaveletCoeffs dwt(std::span<const double> x, const WaveletSpec& spec, int levels,
                  BoundaryMode mode) {
  const std::size_t n = x.size();
  if (levels < 1 || levels > 30 || n == 0 || (n >> levels) == 0) {
    throw Error(ErrorKind::TooManyLevels, std::to_string(levels) + " level(s) on " +
                                              std::to_string(n) + " samples (need n >= 2^levels)");
  }
  if (mode == BoundaryMode::periodic && n % (std::size_t{1} << levels) != 0) {
    throw Error(ErrorKind::TooManyLevels, "periodic mode needs n divisible by 2^levels");
  }

  WaveletCoeffs c;
  c.wavelet = spec.name;
  c.boundary_mode = mode;
  c.levels = levels;
  c.original_length = n;
  std::vector<double> current(x.begin(), x.end());
  for (int l = 0; l < levels; ++l) {
    c.input_lengths.push_back(current.size());
    std::vector<double> a, d;
    analysis_step(current, spec, mode, a, d);
    c.details.push_back(std::move(d));
    current = std::move(a);
  }
  c.approx = std::move(current);
  return c;
}

std::vector<double> idwt(const WaveletCoeffs& coeffs, const WaveletSpec& spec) {
  if (coeffs.wavelet != spec.name) {
    throw Error(ErrorKind::SpecMismatch,
                "coefficients from '" + coeffs.wavelet + "', spec is '" + spec.name + "'");
  }
  const auto levels = static_cast<std::size_t>(coeffs.levels);
  if (coeffs.details.size() != levels || coeffs.input_lengths.size() != levels) {
    throw Error(ErrorKind::SpecMismatch, "level bookkeeping is inconsistent");
  }
  std::vector<double> current = coeffs.approx;
  for (std::size_t l = levels; l-- > 0;) {
    const std::size_t n = coeffs.input_lengths[l];
    const std::size_t m = dwt_output_length(n, spec.length(), coeffs.boundary_mode);
    if (current.size() != m || coeffs.details[l].size() != m) {
      throw Error(ErrorKind::SpecMismatch,
                  "level " + std::to_string(l + 1) + " coefficient length does not match spec");
    }
    current = synthesis_step(current, coeffs.details[l], spec, coeffs.boundary_mode, n);
  }
  return current;
}

std::vector<int> WdParams::default_truncation(int levels) {
  std::vector<int> out;
  for (int l = 1; l < levels; ++l) out.push_back(l);
  return out;
}

WdRegResult regularize_wd(const TimeSeries& series, const WdParams& params,
                          const TimeSeries* predictor) {
  const WaveletSpec& spec = wavelet(params.wavelet);
  for (int l : params.truncate_details) {
    if (l < 1 || l > params.levels) {
      throw Error(ErrorKind::InvalidParameter,
                  "truncated level " + std::to_string(l) + " outside 1.." +
                      std::to_string(params.levels));
    }
  }
  WaveletCoeffs c = dwt(series.values, spec, params.levels, params.mode);

  WdRegResult res;
  std::vector<int> levels = params.truncate_details;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (int l : levels) {
    auto& d = c.details[static_cast<std::size_t>(l - 1)];
    double e = 0.0;
    for (double v : d) e += v * v;
    std::fill(d.begin(), d.end(), 0.0);
    res.report.truncated.push_back(l);
    res.report.removed_detail_energy.push_back(e);
  }

  res.series.t0_ms = series.t0_ms;
  res.series.dt_ms = series.dt_ms;
  res.series.values = idwt(c, spec);
  res.report.entropy_before = series_entropy(series);
  res.report.entropy_after = series_entropy(res.series);
  if (predictor) {
    res.report.gate = entropy_gate(series, res.series, *predictor, params.entropy_tolerance);
  }
  return res;
}

}  // namespace seisreg
