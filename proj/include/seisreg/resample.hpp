#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seisreg/exec.hpp"
#include "seisreg/series.hpp"

namespace seisreg {

/// Time-depth curve from a well-seismic tie. Both columns strictly increasing.
class VelocityProfile {
public:
  struct Knot {
    double depth_m;
    double time_ms;
  };

  explicit VelocityProfile(std::vector<Knot> knots);

  /// Piecewise-linear time at depth; throws DepthOutOfRange outside the knots.
  double time_at(double depth_m) const;
  const std::vector<Knot>& knots() const { return knots_; }

private:
  std::vector<Knot> knots_;
};

/// Reads a `depth_m,time_ms` CSV.
VelocityProfile parse_velocity_csv(std::string_view text);
std::string write_velocity_csv(const VelocityProfile& vp);

/// Depth-indexed samples; depths strictly increasing.
struct DepthSeries {
  std::vector<double> depth_m;
  std::vector<double> values;
};

/// Maps each depth through the profile and linearly resamples onto the grid
/// {k * dt_out_ms} that falls inside the mapped time span.
TimeSeries depth_to_time(const DepthSeries& log, const VelocityProfile& vp, double dt_out_ms);

/// Whittaker-Shannon reconstruction y(t) = sum_k x[k] sinc((t - t_k)/dt) over
/// every source sample. Upsampling only; the target grid must lie inside the
/// source span.
TimeSeries sinc_resample(const TimeSeries& trace, double target_t0_ms, double target_dt_ms,
                         std::size_t n_out, Exec exec = Exec::parallel);

struct ZScoreStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // population
};

struct ZScoreResult {
  std::vector<std::vector<double>> columns;
  ZScoreStats stats;
};

/// Column-wise (x - mean)/std. Fresh statistics use the population variance;
/// supplied statistics are applied unchanged.
ZScoreResult zscore(const std::vector<std::vector<double>>& columns,
                    const ZScoreStats* stats = nullptr);

/// Affine map sending [min, max] onto [lo, hi], with its inverse.
struct MinMaxMap {
  double min = 0.0;
  double max = 1.0;
  double lo = 0.1;
  double hi = 0.9;

  double forward(double x) const { return lo + (x - min) * (hi - lo) / (max - min); }
  double inverse(double y) const { return min + (y - lo) * (max - min) / (hi - lo); }
};

struct MinMaxResult {
  std::vector<double> values;
  MinMaxMap map;
};

MinMaxResult minmax_to_band(std::span<const double> series, double lo = 0.1, double hi = 0.9);

struct Provenance {
  std::string well;
  double time_ms = 0.0;

  auto operator<=>(const Provenance&) const = default;
};

/// Row-major predictor table with one target and one provenance tag per row.
struct PatternSet {
  std::size_t n_inputs = 0;
  std::vector<double> inputs;
  std::vector<double> targets;
  std::vector<Provenance> tags;

  std::size_t size() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const {
    return {inputs.data() + i * n_inputs, n_inputs};
  }
  void push_back(std::span<const double> x, double target, Provenance tag);
};

struct DatasetSplit {
  PatternSet train;
  PatternSet test;
  PatternSet validation;
  std::uint64_t seed = 0;
};

/// Per well: seeded shuffle, first 70% to train. The pooled remainder is
/// shuffled and halved into test and validation.
DatasetSplit split_patterns(const PatternSet& patterns, std::uint64_t seed);

}  // namespace seisreg
