#include "seisreg/resample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "seisreg/error.hpp"
#include "seisreg/rng.hpp"

namespace seisreg {

VelocityProfile::VelocityProfile(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) {
    throw Error(ErrorKind::InvalidVelocityProfile, "need at least 2 knots");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].depth_m > knots_[i - 1].depth_m) ||
        !(knots_[i].time_ms > knots_[i - 1].time_ms)) {
      throw Error(ErrorKind::InvalidVelocityProfile,
                  "depth and time must both increase strictly (knot " + std::to_string(i) + ")");
    }
  }
}

double VelocityProfile::time_at(double depth_m) const {
  const double lo = knots_.front().depth_m, hi = knots_.back().depth_m;
  if (!(depth_m >= lo && depth_m <= hi)) {
    std::ostringstream msg;
    msg << "depth " << depth_m << " m outside profile range [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::DepthOutOfRange, msg.str());
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), depth_m,
                             [](double d, const Knot& k) { return d < k.depth_m; });
  if (it == knots_.end()) return knots_.back().time_ms;
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  const double w = (depth_m - a.depth_m) / (b.depth_m - a.depth_m);
  return a.time_ms + w * (b.time_ms - a.time_ms);
}

VelocityProfile parse_velocity_csv(std::string_view text) {
  std::vector<VelocityProfile::Knot> knots;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header) {
      header = false;
      if (line.find("depth") != std::string::npos) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    VelocityProfile::Knot k{};
    if (!(row >> k.depth_m >> k.time_ms)) {
      throw Error(ErrorKind::InvalidVelocityProfile, "malformed velocity row: " + line);
    }
    knots.push_back(k);
  }
  return VelocityProfile(std::move(knots));
}

std::string write_velocity_csv(const VelocityProfile& vp) {
  std::ostringstream out;
  out.precision(17);
  out << "depth_m,time_ms\n";
  for (const auto& k : vp.knots()) out << k.depth_m << ',' << k.time_ms << '\n';
  return out.str();
}

TimeSeries depth_to_time(const DepthSeries& log, const VelocityProfile& vp, double dt_out_ms) {
  if (log.depth_m.size() != log.values.size() || log.depth_m.size() < 2) {
    throw Error(ErrorKind::LengthMismatch, "depth log needs >= 2 (depth, value) pairs");
  }
  if (!(dt_out_ms > 0.0)) throw Error(ErrorKind::InvalidParameter, "dt_out_ms must be positive");

  std::vector<double> times(log.depth_m.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    times[i] = vp.time_at(log.depth_m[i]);
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw Error(ErrorKind::InvalidParameter, "log depths must increase strictly");
    }
  }

  const double eps = 1e-9;
  const auto k0 = static_cast<long long>(std::ceil(times.front() / dt_out_ms - eps));
  const auto k1 = static_cast<long long>(std::floor(times.back() / dt_out_ms + eps));
  TimeSeries out;
  out.t0_ms = static_cast<double>(k0) * dt_out_ms;
  out.dt_ms = dt_out_ms;
  if (k1 < k0) return out;

  out.values.resize(static_cast<std::size_t>(k1 - k0 + 1));
  std::size_t seg = 0;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    const double t = static_cast<double>(k0 + static_cast<long long>(j)) * dt_out_ms;
    while (seg + 2 < times.size() && times[seg + 1] < t) ++seg;
    const double ta = times[seg], tb = times[seg + 1];
    const double w = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
    out.values[j] = log.values[seg] + w * (log.values[seg + 1] - log.values[seg]);
  }
  return out;
}

namespace {

double sinc_at(double u) {
  const double r = std::nearbyint(u);
  // Integer offsets evaluate exactly so that grids sharing source samples reproduce them.
  if (std::abs(u - r) < 1e-9) return r == 0.0 ? 1.0 : 0.0;
  const double x = std::numbers::pi * u;
  return std::sin(x) / x;
}

}  // namespace

TimeSeries sinc_resample(const TimeSeries& trace, double target_t0_ms, double target_dt_ms,
                         std::size_t n_out, Exec exec) {
  if (trace.values.empty()) throw Error(ErrorKind::TooShort, "empty source trace");
  if (!(target_dt_ms > 0.0)) throw Error(ErrorKind::InvalidParameter, "target dt must be positive");
  if (target_dt_ms > trace.dt_ms * (1.0 + 1e-12)) {
    throw Error(ErrorKind::DownsampleRequested, "target dt exceeds source dt");
  }
  const double tol = 1e-9 * trace.dt_ms;
  const double t_last = target_t0_ms + target_dt_ms * static_cast<double>(n_out ? n_out - 1 : 0);
  if (target_t0_ms < trace.t0_ms - tol || t_last > trace.end_ms() + tol) {
    std::ostringstream msg;
    msg << "target [" << target_t0_ms << ", " << t_last << "] ms outside source ["
        << trace.t0_ms << ", " << trace.end_ms() << "] ms";
    throw Error(ErrorKind::TargetOutsideSpan, msg.str());
  }

  TimeSeries out;
  out.t0_ms = target_t0_ms;
  out.dt_ms = target_dt_ms;
  out.values.resize(n_out);
  const std::size_t n_src = trace.values.size();
  const double* src = trace.values.data();
  double* dst = out.values.data();
  for_each_index(exec, static_cast<std::ptrdiff_t>(n_out), [&](std::ptrdiff_t j) {
    const double t = target_t0_ms + target_dt_ms * static_cast<double>(j);
    const double u0 = (t - trace.t0_ms) / trace.dt_ms;
    double acc = 0.0;
    for (std::size_t k = 0; k < n_src; ++k) acc += src[k] * sinc_at(u0 - static_cast<double>(k));
    dst[j] = acc;
  });
  return out;
}

ZScoreResult zscore(const std::vector<std::vector<double>>& columns, const ZScoreStats* stats) {
  ZScoreResult res;
  if (stats) {
    if (stats->mean.size() != columns.size() || stats->stddev.size() != columns.size()) {
      throw Error(ErrorKind::DimensionMismatch, "z-score stats do not match column count");
    }
    res.stats = *stats;
  } else {
    res.stats.mean.resize(columns.size());
    res.stats.stddev.resize(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& col = columns[c];
      if (col.empty()) throw Error(ErrorKind::TooShort, "empty column");
      double mean = 0.0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(col.size());
      double var = 0.0;
      for (double v : col) var += (v - mean) * (v - mean);
      var /= static_cast<double>(col.size());
      if (!(var > 0.0)) {
        throw Error(ErrorKind::ZeroVariance, "column " + std::to_string(c) + " is constant");
      }
      res.stats.mean[c] = mean;
      res.stats.stddev[c] = std::sqrt(var);
    }
  }
  res.columns.resize(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    res.columns[c].resize(columns[c].size());
    for (std::size_t i = 0; i < columns[c].size(); ++i) {
      res.columns[c][i] = (columns[c][i] - res.stats.mean[c]) / res.stats.stddev[c];
    }
  }
  return res;
}

MinMaxResult minmax_to_band(std::span<const double> series, double lo, double hi) {
  if (series.empty()) throw Error(ErrorKind::DegenerateRange, "empty series");
  const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
  if (!(*mx > *mn)) throw Error(ErrorKind::DegenerateRange, "max equals min");
  MinMaxResult res;
  res.map = MinMaxMap{*mn, *mx, lo, hi};
  res.values.reserve(series.size());
  for (double v : series) res.values.push_back(res.map.forward(v));
  return res;
}

void PatternSet::push_back(std::span<const double> x, double target, Provenance tag) {
  if (n_inputs == 0 && targets.empty()) n_inputs = x.size();
  if (x.size() != n_inputs) throw Error(ErrorKind::DimensionMismatch, "pattern width mismatch");
  inputs.insert(inputs.end(), x.begin(), x.end());
  targets.push_back(target);
  tags.push_back(std::move(tag));
}

DatasetSplit split_patterns(const PatternSet& patterns, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_well;
  for (std::size_t i = 0; i < patterns.size(); ++i) by_well[patterns.tags[i].well].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> train_idx, rest_idx;
  for (auto& [well, idx] : by_well) {
    if (idx.size() < 10) {
      throw Error(ErrorKind::TooFewPatterns, "well '" + well + "' has " +
                                                 std::to_string(idx.size()) + " patterns, need 10");
    }
    rng.shuffle(idx);
    const std::size_t n_train = (7 * idx.size() + 5) / 10;
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    rest_idx.insert(rest_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  rng.shuffle(train_idx);
  rng.shuffle(rest_idx);

  auto gather = [&](std::span<const std::size_t> idx) {
    PatternSet out;
    out.n_inputs = patterns.n_inputs;
    for (std::size_t i : idx) out.push_back(patterns.row(i), patterns.targets[i], patterns.tags[i]);
    return out;
  };
  DatasetSplit split;
  split.seed = seed;
  const std::size_t n_test = rest_idx.size() / 2;
  split.train = gather(train_idx);
  split.test = gather(std::span(rest_idx).first(n_test));
  split.validation = gather(std::span(rest_idx).subspan(n_test));
  return split;
}

}  // namespace seisreg
