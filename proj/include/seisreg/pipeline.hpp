#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seisreg/config.hpp"
#include "seisreg/formats.hpp"
#include "seisreg/metrics.hpp"
#include "seisreg/model.hpp"
#include "seisreg/scg.hpp"

namespace seisreg {

/// Centered mean over `span` samples; near the ends the window shrinks to the
/// samples that exist. span must be odd and no longer than the series.
std::vector<double> moving_average_baseline(std::span<const double> x, int span = 9);

/// One well on its time grid, with every predictor resampled onto that grid.
struct WellData {
  std::string name;
  std::int32_t inline_no = 0;
  std::int32_t xline_no = 0;
  TimeSeries target;
  std::vector<TimeSeries> predictors;
};

struct FieldData {
  std::vector<Volume> volumes;
  std::vector<std::string> predictor_names;
  std::vector<WellData> wells;
};

/// Reads volumes (.svol or SEG-Y), logs and velocity tables; converts each log
/// to time and resamples the attribute traces at the well onto its grid.
FieldData load_field(const RunConfig& cfg);

/// Pattern table as CSV: well,time_ms,<predictors...>,<target>.
std::string patterns_csv(const FieldData& field, const std::string& target_name);
/// Inverse of patterns_csv. Rows of one well must be contiguous and evenly
/// spaced in time. The returned field carries no volumes.
FieldData field_from_patterns_csv(std::string_view text, std::string* target_name = nullptr);

/// Regularization parameters for one attempt of the feedback loop.
struct RegSettings {
  RegMethod method = RegMethod::none;
  int avg_span = 9;
  double ft_zeta_max_hz = 0.0;  // 0 = per-well default from the reference predictor
  double ft_zeta_scale = 1.0;
  WdParams wd;
  SiftParams sift;
  int emd_p1 = 3;
  double tolerance = 0.05;

  static RegSettings from(const RunConfig& cfg);
  /// The next, more aggressive setting; empty when the method cannot tighten further.
  std::optional<RegSettings> tightened(std::size_t shortest_series) const;
  nlohmann::json to_json() const;
};

struct WellRegularization {
  TimeSeries series;
  nlohmann::json details;  // method-specific report, including the entropy gate
};

/// Regularizes each well's target in its own units. Predictor 0 is the
/// reference for the entropy gate and the default FT cutoff.
std::vector<WellRegularization> regularize_wells(const std::vector<WellData>& wells,
                                                 const RegSettings& settings);

struct EntropyRow {
  std::string well;
  double h_raw = 0.0;
  double h_regularized = 0.0;
  std::vector<double> h_predictors;
  std::vector<double> nmi_raw;          // nmi(predictor_i, raw target)
  std::vector<double> nmi_regularized;  // nmi(predictor_i, regularized target)
};

/// CC above 0.8, RMSE and AEM below 0.15, SI below 0.35; undefined CC or SI fails.
bool good_fit(const MetricsReport& m);

struct MetricsRow {
  std::string label;
  std::size_t n = 0;
  MetricsReport metrics;
  bool good_fit = false;
};

struct TrainSummary {
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  double final_loss = 0.0;
  std::string termination;
};

struct Attempt {
  int index = 0;
  RegSettings settings;
  std::vector<nlohmann::json> well_details;
  std::vector<EntropyRow> entropy;
  std::size_t n_train = 0, n_test = 0, n_validation = 0;
  TrainSummary train;
  MetricsRow test;
  std::vector<MetricsRow> validation;  // one row per well
  MetricsRow validation_pooled;
  bool meets_threshold = false;
};

struct VolumeSummary {
  std::size_t valid_voxels = 0;
  double mean = 0.0, min = 0.0, max = 0.0;
  double filtered_mean = 0.0;
};

struct RunReport {
  KeyValues config;  // resolved, without out_dir
  std::vector<std::string> predictor_names;
  std::vector<Attempt> attempts;
  std::size_t selected = 0;  // index into attempts
  // threshold_met, max_attempts, no_tightening, or "tightening_rejected: <error>"
  std::string stop_reason;
  std::optional<VolumeSummary> volume;

  const Attempt& final_attempt() const { return attempts.at(selected); }
};

struct RunResult {
  RunReport report;
  TrainedModel model;
  TrainHistory history;
  std::optional<Volume> prediction;
  std::optional<Volume> filtered;
};

/// ingest -> time conversion -> resampling -> regularization -> entropy/NMI
/// tables -> split -> SCG training -> test and per-well validation metrics,
/// repeated with tightened regularization while validation CC stays below the
/// threshold, then the optional volume sweep and median filter.
RunResult run_workflow(const RunConfig& cfg);
RunResult run_workflow(const RunConfig& cfg, const FieldData& field);

/// Writes report.json, report.txt, validation.csv, entropy.csv, history.csv,
/// model.json, resolved.cfg and any volumes into cfg.out_dir.
void write_run_outputs(const RunConfig& cfg, const RunResult& result);

nlohmann::json report_to_json(const RunReport& report);
/// Entropy/NMI and validation tables with the good-fit verdict, as plain text.
std::string report_tables(const nlohmann::json& report);
std::string validation_csv(const nlohmann::json& report);
std::string entropy_csv(const nlohmann::json& report);

}  // namespace seisreg
