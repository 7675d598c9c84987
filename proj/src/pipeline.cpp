#include "seisreg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "seisreg/emdreg.hpp"
#include "seisreg/error.hpp"
#include "seisreg/ftreg.hpp"
#include "seisreg/resample.hpp"
#include "seisreg/volpost.hpp"
#include "seisreg/waveletreg.hpp"

namespace seisreg {

using nlohmann::json;

namespace {

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.detail());
  }
}

Volume read_volume(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".sgy" || ext == ".segy") {
    const auto bytes = read_file_bytes(path);
    return volume_from_traces(parse_segy(bytes), path.stem().string());
  }
  Volume v = read_svol(path);
  if (v.attribute_name.empty()) v.attribute_name = path.stem().string();
  return v;
}

json gate_json(const std::optional<GateVerdict>& g) {
  if (!g) return nullptr;
  return {{"original_entropy", g->original_entropy},
          {"regularized_entropy", g->regularized_entropy},
          {"predictor_entropy", g->predictor_entropy},
          {"tolerance", g->tolerance},
          {"pass", g->pass}};
}

}  // namespace

std::vector<double> moving_average_baseline(std::span<const double> x, int span) {
  if (span < 1 || span % 2 == 0) throw Error(ErrorKind::InvalidParameter, "span must be odd and >= 1");
  if (static_cast<std::size_t>(span) > x.size()) {
    throw Error(ErrorKind::SpanTooLarge, "span " + std::to_string(span) + " exceeds series length " +
                                             std::to_string(x.size()));
  }
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t h = span / 2;
  std::vector<double> y(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t a = std::max<std::ptrdiff_t>(0, i - h), b = std::min(n - 1, i + h);
    double s = 0.0;
    for (std::ptrdiff_t j = a; j <= b; ++j) s += x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s / static_cast<double>(b - a + 1);
  }
  return y;
}

FieldData load_field(const RunConfig& cfg) {
  FieldData field;
  in_stage("ingest volumes", [&] {
    for (const auto& v : cfg.volumes) {
      field.volumes.push_back(read_volume(cfg.resolve(v)));
      field.predictor_names.push_back(field.volumes.back().attribute_name);
      if (!(field.volumes.back().geometry == field.volumes.front().geometry)) {
        throw Error(ErrorKind::GeometryMismatch, v + " differs in geometry from " + cfg.volumes.front());
      }
    }
  });

  for (std::size_t w = 0; w < cfg.logs.size(); ++w) {
    const std::string stage = "ingest well " + cfg.logs[w];
    WellData well = in_stage(stage.c_str(), [&] {
      const LasLog las = parse_las(read_file_text(cfg.resolve(cfg.logs[w])));
      const VelocityProfile vp = parse_velocity_csv(read_file_text(cfg.resolve(cfg.velocities[w])));

      WellData out;
      const auto name = las.well_meta.find("WELL");
      out.name = name != las.well_meta.end() && !name->second.value.empty()
                     ? name->second.value
                     : std::filesystem::path(cfg.logs[w]).stem().string();
      const auto il = las.meta_number("INLINE"), xl = las.meta_number("XLINE");
      if (!il || !xl) throw Error(ErrorKind::MalformedLas, "~W section lacks INLINE/XLINE");
      out.inline_no = static_cast<std::int32_t>(*il);
      out.xline_no = static_cast<std::int32_t>(*xl);

      const auto col = las.curve_index(cfg.target_curve);
      if (!col) throw Error(ErrorKind::MalformedLas, "no curve named " + cfg.target_curve);
      DepthSeries ds;
      for (const auto& row : las.rows) {
        if (!row[*col]) continue;
        ds.depth_m.push_back(*row[0]);
        ds.values.push_back(*row[*col]);
      }
      if (ds.depth_m.size() >= 2 && ds.depth_m[1] < ds.depth_m[0]) {
        std::reverse(ds.depth_m.begin(), ds.depth_m.end());
        std::reverse(ds.values.begin(), ds.values.end());
      }
      TimeSeries target = depth_to_time(ds, vp, cfg.log_dt_ms);

      const Volume& ref = field.volumes.front();
      const auto ili = ref.geometry.inline_index(out.inline_no);
      const auto xli = ref.geometry.xline_index(out.xline_no);
      if (!ili || !xli) {
        throw Error(ErrorKind::DepthOutOfRange, "well location (" + std::to_string(out.inline_no) +
                                                    ", " + std::to_string(out.xline_no) +
                                                    ") lies outside the survey");
      }
      // keep the part of the log covered by the seismic window
      const double lo = ref.geometry.t0_ms;
      const double hi = lo + ref.geometry.dt_ms * static_cast<double>(ref.geometry.n_samples - 1);
      std::size_t first = 0, last = target.size();
      while (first < last && target.time_at(first) < lo - 1e-9) ++first;
      while (last > first && target.time_at(last - 1) > hi + 1e-9) --last;
      out.target.dt_ms = target.dt_ms;
      out.target.t0_ms = target.time_at(first);
      out.target.values.assign(target.values.begin() + static_cast<std::ptrdiff_t>(first),
                               target.values.begin() + static_cast<std::ptrdiff_t>(last));
      if (out.target.size() < 16) {
        throw Error(ErrorKind::TooShort, "fewer than 16 log samples inside the seismic window");
      }
      for (const Volume& v : field.volumes) {
        auto trace = v.trace(*ili, *xli);
        if (!trace) throw Error(ErrorKind::EmptyVolume, "attribute trace at the well is masked");
        out.predictors.push_back(
            sinc_resample(*trace, out.target.t0_ms, out.target.dt_ms, out.target.size()));
      }
      return out;
    });
    field.wells.push_back(std::move(well));
  }
  return field;
}

RegSettings RegSettings::from(const RunConfig& cfg) {
  RegSettings s;
  s.method = cfg.method;
  s.avg_span = cfg.avg_span;
  s.ft_zeta_max_hz = cfg.ft_zeta_max_hz;
  s.wd = cfg.wd;
  s.sift = cfg.sift;
  s.emd_p1 = cfg.emd_p1;
  s.tolerance = cfg.gate_tolerance;
  return s;
}

std::optional<RegSettings> RegSettings::tightened(std::size_t shortest_series) const {
  RegSettings next = *this;
  switch (method) {
    case RegMethod::none:
    case RegMethod::avg9:
      return std::nullopt;
    case RegMethod::ft:
      next.ft_zeta_scale *= 0.8;
      return next;
    case RegMethod::wd: {
      int deepest = 0;
      for (int l : wd.truncate_details) deepest = std::max(deepest, l);
      if (deepest >= wd.levels) {
        // every detail is already gone; go one level deeper if the signal allows it
        if ((std::size_t{1} << (wd.levels + 1)) > shortest_series) return std::nullopt;
        next.wd.levels = wd.levels + 1;
      }
      next.wd.truncate_details.push_back(deepest + 1);
      return next;
    }
    case RegMethod::emd:
      next.emd_p1 = emd_p1 + 1;
      return next;
  }
  return std::nullopt;
}

json RegSettings::to_json() const {
  json j{{"method", std::string(to_string(method))}};
  switch (method) {
    case RegMethod::none:
      break;
    case RegMethod::avg9:
      j["span"] = avg_span;
      break;
    case RegMethod::ft:
      j["zeta_max_hz"] = ft_zeta_max_hz;
      j["zeta_scale"] = ft_zeta_scale;
      break;
    case RegMethod::wd:
      j["wavelet"] = wd.wavelet;
      j["levels"] = wd.levels;
      j["truncate"] = wd.truncate_details;
      j["mode"] = std::string(to_string(wd.mode));
      break;
    case RegMethod::emd:
      j["p1"] = emd_p1;
      j["sd_threshold"] = sift.sd_threshold;
      j["max_sift_iters"] = sift.max_sift_iters;
      j["max_imfs"] = sift.max_imfs;
      break;
  }
  return j;
}

std::vector<WellRegularization> regularize_wells(const std::vector<WellData>& wells,
                                                 const RegSettings& s) {
  std::vector<WellRegularization> out;
  for (const WellData& w : wells) {
    const TimeSeries& ref = w.predictors.front();
    WellRegularization r;
    r.details = {{"well", w.name}};
    const std::string stage = "regularize " + w.name;
    in_stage(stage.c_str(), [&] {
      switch (s.method) {
        case RegMethod::none:
          r.series = w.target;
          break;
        case RegMethod::avg9: {
          r.series = w.target;
          r.series.values = moving_average_baseline(w.target.values, s.avg_span);
          r.details["gate"] = gate_json(entropy_gate(w.target, r.series, ref, s.tolerance));
          break;
        }
        case RegMethod::ft: {
          const double base = s.ft_zeta_max_hz > 0.0 ? s.ft_zeta_max_hz : default_zeta_max(ref);
          const double zeta = base * s.ft_zeta_scale;
          auto res = regularize_ft(w.target, {zeta, s.tolerance}, &ref);
          r.series = std::move(res.series);
          r.details["zeta_max_hz"] = res.report.zeta_max_hz;
          r.details["retained_bins"] = res.report.retained_bins;
          r.details["imag_rms"] = res.report.imag_rms;
          r.details["gate"] = gate_json(res.report.gate);
          break;
        }
        case RegMethod::wd: {
          auto res = regularize_wd(w.target, s.wd, &ref);
          r.series = std::move(res.series);
          r.details["truncated"] = res.report.truncated;
          r.details["removed_detail_energy"] = res.report.removed_detail_energy;
          r.details["gate"] = gate_json(res.report.gate);
          break;
        }
        case RegMethod::emd: {
          auto res = regularize_emd(w.target, s.sift, s.emd_p1, &ref, s.tolerance);
          r.series = std::move(res.series);
          r.details["imf_count"] = res.report.imf_count;
          r.details["p1"] = res.report.p1;
          r.details["gate"] = gate_json(res.report.gate);
          break;
        }
      }
    });
    out.push_back(std::move(r));
  }
  return out;
}

bool good_fit(const MetricsReport& m) {
  return m.cc_defined && m.si_defined && m.cc > 0.8 && m.rmse < 0.15 && m.aem < 0.15 && m.si < 0.35;
}

namespace {

std::string termination_name(ScgTermination t) {
  switch (t) {
    case ScgTermination::gradient_vanished: return "gradient_vanished";
    case ScgTermination::target_loss: return "target_loss";
    case ScgTermination::max_iters: return "max_iters";
  }
  return "unknown";
}

MetricsRow metrics_row(std::string label, std::span<const double> pred, std::span<const double> actual) {
  MetricsRow row;
  row.label = std::move(label);
  row.n = actual.size();
  row.metrics = evaluate(pred, actual);
  row.good_fit = good_fit(row.metrics);
  return row;
}

struct AttemptOutput {
  Attempt attempt;
  TrainedModel model;
  TrainHistory history;
};

AttemptOutput run_attempt(const RunConfig& cfg, const FieldData& field, const RegSettings& settings,
                          int index) {
  AttemptOutput out;
  Attempt& a = out.attempt;
  a.index = index;
  a.settings = settings;

  const auto reg = regularize_wells(field.wells, settings);
  const std::size_t n_pred = field.predictor_names.size();

  in_stage("entropy report", [&] {
    for (std::size_t w = 0; w < field.wells.size(); ++w) {
      const WellData& well = field.wells[w];
      a.well_details.push_back(reg[w].details);
      EntropyRow row;
      row.well = well.name;
      row.h_raw = series_entropy(well.target);
      row.h_regularized = series_entropy(reg[w].series);
      for (const auto& p : well.predictors) {
        row.h_predictors.push_back(series_entropy(p));
        row.nmi_raw.push_back(nmi(p.values, well.target.values, cfg.mi_bins));
        row.nmi_regularized.push_back(nmi(p.values, reg[w].series.values, cfg.mi_bins));
      }
      a.entropy.push_back(std::move(row));
    }
  });

  // patterns: raw predictor values in, regularized target (physical units) out
  PatternSet patterns;
  patterns.n_inputs = n_pred;
  std::vector<double> x(n_pred);
  for (std::size_t w = 0; w < field.wells.size(); ++w) {
    const WellData& well = field.wells[w];
    for (std::size_t i = 0; i < well.target.size(); ++i) {
      for (std::size_t c = 0; c < n_pred; ++c) x[c] = well.predictors[c].values[i];
      patterns.push_back(x, reg[w].series.values[i], {well.name, well.target.time_at(i)});
    }
  }

  TrainedModel& model = out.model;
  const auto norm = in_stage("normalize", [&] {
    std::vector<std::vector<double>> cols(n_pred, std::vector<double>(patterns.size()));
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      for (std::size_t c = 0; c < n_pred; ++c) cols[c][i] = patterns.row(i)[c];
    }
    auto z = zscore(cols);
    model.input_stats = z.stats;
    auto mm = minmax_to_band(patterns.targets, 0.1, 0.9);
    model.target_map = mm.map;
    PatternSet normalized = patterns;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      for (std::size_t c = 0; c < n_pred; ++c) normalized.inputs[i * n_pred + c] = z.columns[c][i];
      normalized.targets[i] = mm.values[i];
    }
    return normalized;
  });

  const DatasetSplit split = in_stage("split", [&] { return split_patterns(norm, cfg.split_seed); });
  a.n_train = split.train.size();
  a.n_test = split.test.size();
  a.n_validation = split.validation.size();

  {
    std::set<Provenance> seen(split.train.tags.begin(), split.train.tags.end());
    seen.insert(split.test.tags.begin(), split.test.tags.end());
    for (const auto& t : split.validation.tags) {
      if (seen.count(t)) {
        throw Error(ErrorKind::ProvenanceOverlap, "validation pattern " + t.well + "@" +
                                                      std::to_string(t.time_ms) +
                                                      " also appears in training or testing");
      }
    }
  }

  model.seed = cfg.mlp_seed;
  const TrainResult trained = in_stage("train", [&] {
    const MlpModel init = init_model(n_pred, cfg.hidden, cfg.mlp_seed);
    const PatternView view{split.train.inputs, split.train.targets, n_pred};
    return scg_train(init, view, cfg.scg);
  });
  model.mlp = trained.model;
  out.history = trained.history;
  a.train.iterations = trained.history.iterations.size();
  a.train.accepted = static_cast<std::size_t>(
      std::count_if(trained.history.iterations.begin(), trained.history.iterations.end(),
                    [](const ScgIteration& it) { return it.accepted; }));
  a.train.final_loss = trained.final_loss;
  a.train.termination = termination_name(trained.reason);

  // Predictions and targets go back to physical units before scoring.
  auto score = [&](const PatternSet& set, const std::string& label,
                   const std::string* well) -> std::optional<MetricsRow> {
    std::vector<double> pred, actual;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (well && set.tags[i].well != *well) continue;
      pred.push_back(model.target_map.inverse(forward(model.mlp, set.row(i))));
      actual.push_back(model.target_map.inverse(set.targets[i]));
    }
    if (pred.size() < 2) return std::nullopt;
    return metrics_row(label, pred, actual);
  };
  in_stage("evaluate", [&] {
    auto must = [](std::optional<MetricsRow> row, const char* what) {
      if (!row) throw Error(ErrorKind::TooFewPatterns, std::string(what) + " set has < 2 patterns");
      return *row;
    };
    a.test = must(score(split.test, "test", nullptr), "test");
    for (const WellData& w : field.wells) {
      if (auto row = score(split.validation, w.name, &w.name)) a.validation.push_back(*row);
    }
    a.validation_pooled = must(score(split.validation, "all", nullptr), "validation");
  });
  a.meets_threshold = a.validation_pooled.metrics.cc_defined &&
                      a.validation_pooled.metrics.cc >= cfg.cc_threshold;
  return out;
}

}  // namespace

RunResult run_workflow(const RunConfig& cfg) {
  cfg.validate();
  return run_workflow(cfg, load_field(cfg));
}

RunResult run_workflow(const RunConfig& cfg, const FieldData& field) {
  RunResult result;
  RunReport& report = result.report;
  report.config = resolved_key_values(cfg);
  report.config.erase("out_dir");
  report.predictor_names = field.predictor_names;

  std::size_t shortest = SIZE_MAX;
  for (const auto& w : field.wells) shortest = std::min(shortest, w.target.size());

  std::optional<RegSettings> settings = RegSettings::from(cfg);
  for (int attempt = 1; settings && attempt <= cfg.max_attempts; ++attempt) {
    AttemptOutput out;
    try {
      out = run_attempt(cfg, field, *settings, attempt);
    } catch (const Error& e) {
      // a tightened setting the regularizer rejects ends the loop; the first attempt must succeed
      if (attempt == 1 || category(e.kind()) != ErrorCategory::config) throw;
      report.stop_reason = std::string("tightening_rejected: ") + e.what();
      break;
    }
    report.attempts.push_back(std::move(out.attempt));
    result.model = std::move(out.model);
    result.history = std::move(out.history);
    report.selected = report.attempts.size() - 1;
    if (report.attempts.back().meets_threshold) {
      report.stop_reason = "threshold_met";
      break;
    }
    settings = settings->tightened(shortest);
    if (!settings) report.stop_reason = "no_tightening";
  }
  if (report.stop_reason.empty()) report.stop_reason = "max_attempts";

  if (cfg.predict_volume && !field.volumes.empty()) {
    in_stage("predict volume", [&] {
      std::vector<const SeismicVolume*> attrs;
      for (const auto& v : field.volumes) attrs.push_back(&v);
      result.prediction = predict_volume(result.model, attrs);
      result.filtered = median_filter_3d(*result.prediction, {cfg.median_window, false});
    });
    VolumeSummary vs;
    double sum = 0.0, fsum = 0.0;
    vs.min = INFINITY;
    vs.max = -INFINITY;
    for (std::size_t i = 0; i < result.prediction->data.size(); ++i) {
      if (!result.prediction->valid[i]) continue;
      const double v = result.prediction->data[i];
      ++vs.valid_voxels;
      sum += v;
      fsum += result.filtered->data[i];
      vs.min = std::min(vs.min, v);
      vs.max = std::max(vs.max, v);
    }
    if (vs.valid_voxels) {
      vs.mean = sum / static_cast<double>(vs.valid_voxels);
      vs.filtered_mean = fsum / static_cast<double>(vs.valid_voxels);
    }
    report.volume = vs;
  }
  return result;
}

std::string patterns_csv(const FieldData& field, const std::string& target_name) {
  std::ostringstream out;
  out.precision(17);
  out << "well,time_ms";
  for (const auto& n : field.predictor_names) out << ',' << n;
  out << ',' << target_name << '\n';
  for (const WellData& w : field.wells) {
    for (std::size_t i = 0; i < w.target.size(); ++i) {
      out << w.name << ',' << w.target.time_at(i);
      for (const auto& p : w.predictors) out << ',' << p.values[i];
      out << ',' << w.target.values[i] << '\n';
    }
  }
  return out.str();
}

FieldData field_from_patterns_csv(std::string_view text, std::string* target_name) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string c;
    std::istringstream s(l);
    while (std::getline(s, c, ',')) cells.push_back(c);
    return cells;
  };
  if (!std::getline(in, line)) throw Error(ErrorKind::TooShort, "empty pattern file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 4 || header[0] != "well" || header[1] != "time_ms") {
    throw Error(ErrorKind::MalformedLas, "pattern header must be well,time_ms,<predictors...>,<target>");
  }
  FieldData field;
  field.predictor_names.assign(header.begin() + 2, header.end() - 1);
  if (target_name) *target_name = header.back();
  const std::size_t n_pred = field.predictor_names.size();

  std::vector<std::vector<double>> times;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::RaggedRow, "pattern line " + std::to_string(line_no) + " has " +
                                            std::to_string(cells.size()) + " cells");
    }
    if (field.wells.empty() || field.wells.back().name != cells[0]) {
      for (const auto& w : field.wells) {
        if (w.name == cells[0]) {
          throw Error(ErrorKind::MalformedLas, "rows of well " + cells[0] + " are not contiguous");
        }
      }
      WellData w;
      w.name = cells[0];
      w.predictors.resize(n_pred);
      field.wells.push_back(std::move(w));
      times.emplace_back();
    }
    WellData& w = field.wells.back();
    std::vector<double> v(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        v[c - 1] = std::stod(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorKind::MalformedLas,
                    "pattern line " + std::to_string(line_no) + ": '" + cells[c] + "' is not a number");
      }
    }
    times.back().push_back(v[0]);
    for (std::size_t p = 0; p < n_pred; ++p) w.predictors[p].values.push_back(v[1 + p]);
    w.target.values.push_back(v.back());
  }
  for (std::size_t i = 0; i < field.wells.size(); ++i) {
    WellData& w = field.wells[i];
    const auto& t = times[i];
    if (t.size() < 2) throw Error(ErrorKind::TooShort, "well " + w.name + " has fewer than 2 rows");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (std::abs(t[k] - (t.front() + dt * static_cast<double>(k))) > 1e-6 * std::abs(dt)) {
        throw Error(ErrorKind::MalformedLas, "well " + w.name + " is not evenly sampled in time");
      }
    }
    w.target.t0_ms = t.front();
    w.target.dt_ms = dt;
    for (auto& p : w.predictors) {
      p.t0_ms = t.front();
      p.dt_ms = dt;
    }
  }
  return field;
}

}  // namespace seisreg
