// seisreg command-line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric divergence.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "seisreg/config.hpp"
#include "seisreg/emdreg.hpp"
#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"
#include "seisreg/ftreg.hpp"
#include "seisreg/metrics.hpp"
#include "seisreg/model.hpp"
#include "seisreg/pipeline.hpp"
#include "seisreg/synthbench.hpp"
#include "seisreg/volpost.hpp"
#include "seisreg/waveletreg.hpp"

namespace sr = seisreg;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    sr::write_file_text(path, text);
  }
}

sr::FieldData read_patterns(const std::string& path, std::string* target) {
  return sr::field_from_patterns_csv(sr::read_file_text(path), target);
}

// ---------------------------------------------------------------------------

struct ConvertOpts {
  std::string in, out, name;
  int inline_byte = 189, xline_byte = 193;
};

int cmd_convert(const ConvertOpts& o) {
  const std::filesystem::path in(o.in);
  const auto ext = in.extension().string();
  if (ext == ".las" || ext == ".LAS") {
    const auto log = sr::parse_las(sr::read_file_text(in));
    emit(o.out, sr::write_las(log));
    return 0;
  }
  if (ext == ".svol") {
    const auto v = sr::read_svol(in);
    std::printf("%s: %zu inlines x %zu xlines x %zu samples, t0 %g ms, dt %g ms\n",
                v.attribute_name.c_str(), v.geometry.n_inlines(), v.geometry.n_xlines(),
                v.geometry.n_samples, v.geometry.t0_ms, v.geometry.dt_ms);
    return 0;
  }
  const auto raw = sr::parse_segy(sr::read_file_bytes(in), {o.inline_byte, o.xline_byte});
  const auto vol = sr::volume_from_traces(raw, o.name.empty() ? in.stem().string() : o.name);
  if (o.out.empty()) throw sr::Error(sr::ErrorKind::ConfigError, "--out is required for SEG-Y input");
  sr::write_svol(o.out, vol);
  std::printf("%zu traces -> %zu x %zu x %zu grid\n", raw.traces.size(), vol.geometry.n_inlines(),
              vol.geometry.n_xlines(), vol.geometry.n_samples);
  return 0;
}

int cmd_synth(const sr::SynthFieldParams& p, const std::string& out) {
  const auto field = sr::generate_field(p);
  sr::write_field(field, out);
  std::printf("wrote %zu wells and 4 volumes to %s\n", field.wells.size(), out.c_str());
  return 0;
}

struct ConfigOpts {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

int cmd_prep(const ConfigOpts& o) {
  const auto cfg = sr::load_run_config(o.config, o.sets);
  cfg.validate();
  const auto field = sr::load_field(cfg);
  std::string target = cfg.target_curve;
  for (auto& c : target) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  emit(o.out, sr::patterns_csv(field, target));
  return 0;
}

int cmd_metrics(const std::string& patterns, int bins, const std::string& csv_out) {
  std::string target;
  const auto field = read_patterns(patterns, &target);
  std::ostringstream csv;
  csv << "well,signal,entropy_bits,nmi_with_" << target << "\n";
  std::printf("%-8s %-10s %12s %12s\n", "Well", "Signal", "H (bits)", "NMI");
  for (const auto& w : field.wells) {
    const double h = sr::series_entropy(w.target);
    std::printf("%-8s %-10s %12.4f %12s\n", w.name.c_str(), target.c_str(), h, "-");
    csv << w.name << ',' << target << ',' << h << ",\n";
    for (std::size_t p = 0; p < w.predictors.size(); ++p) {
      const double hp = sr::series_entropy(w.predictors[p]);
      const double n = sr::nmi(w.predictors[p].values, w.target.values, bins);
      std::printf("%-8s %-10s %12.4f %12.4f\n", w.name.c_str(), field.predictor_names[p].c_str(), hp, n);
      csv << w.name << ',' << field.predictor_names[p] << ',' << hp << ',' << n << "\n";
    }
  }
  if (!csv_out.empty()) sr::write_file_text(csv_out, csv.str());
  return 0;
}

struct RegOpts {
  std::string patterns, out, report;
  std::string method = "ft";
  double zeta = 0.0;
  std::string wavelet = "db4";
  int levels = 7;
  std::string truncate;
  std::string mode = "symmetric";
  int p1 = 3;
  double sd = 0.2;
  int span = 9;
  double tol = 0.05;
};

int cmd_regularize(const RegOpts& o) {
  std::string target;
  auto field = read_patterns(o.patterns, &target);
  sr::RegSettings s;
  s.method = sr::reg_method_from_string(o.method);
  if (s.method == sr::RegMethod::none) {
    throw sr::Error(sr::ErrorKind::ConfigError, "regularize needs a method other than none");
  }
  s.avg_span = o.span;
  s.ft_zeta_max_hz = o.zeta;
  s.wd.wavelet = o.wavelet;
  s.wd.levels = o.levels;
  s.wd.mode = sr::boundary_mode_from_string(o.mode);
  s.wd.truncate_details.clear();
  if (o.truncate.empty()) {
    s.wd.truncate_details = sr::WdParams::default_truncation(o.levels);
  } else {
    for (const auto& t : split_commas(o.truncate)) s.wd.truncate_details.push_back(std::stoi(t));
  }
  s.wd.entropy_tolerance = o.tol;
  s.sift.sd_threshold = o.sd;
  s.emd_p1 = o.p1;
  s.tolerance = o.tol;

  const auto reg = sr::regularize_wells(field.wells, s);
  json report{{"settings", s.to_json()}, {"wells", json::array()}};
  for (std::size_t w = 0; w < field.wells.size(); ++w) {
    json d = reg[w].details;
    d["entropy_before"] = sr::series_entropy(field.wells[w].target);
    d["entropy_after"] = sr::series_entropy(reg[w].series);
    report["wells"].push_back(d);
    field.wells[w].target = reg[w].series;
  }
  emit(o.out, sr::patterns_csv(field, target));
  if (!o.report.empty()) sr::write_file_text(o.report, report.dump(2) + "\n");
  return 0;
}

int cmd_emd_dump(const std::string& patterns, const std::string& well, const std::string& column,
                 double sd, const std::string& out) {
  std::string target;
  const auto field = read_patterns(patterns, &target);
  const sr::TimeSeries* series = nullptr;
  for (const auto& w : field.wells) {
    if (w.name != well) continue;
    if (column.empty() || column == target) series = &w.target;
    for (std::size_t p = 0; p < w.predictors.size(); ++p) {
      if (field.predictor_names[p] == column) series = &w.predictors[p];
    }
  }
  if (!series) throw sr::Error(sr::ErrorKind::ConfigError, "no column '" + column + "' for well " + well);
  sr::SiftParams sp;
  sp.sd_threshold = sd;
  const auto set = sr::emd(*series, sp);
  std::ostringstream csv;
  csv.precision(17);
  csv << "time_ms,signal";
  for (std::size_t k = 0; k < set.imfs.size(); ++k) csv << ",imf" << k + 1;
  csv << ",residue\n";
  for (std::size_t i = 0; i < series->size(); ++i) {
    csv << series->time_at(i) << ',' << series->values[i];
    for (const auto& imf : set.imfs) csv << ',' << imf.values[i];
    csv << ',' << set.residue.values[i] << '\n';
  }
  emit(out, csv.str());
  return 0;
}

struct TrainOpts {
  std::string patterns, out, history;
  std::size_t hidden = 10;
  int max_iters = 500;
  std::uint64_t seed = 7;
  std::uint64_t split_seed = 7;
  double target_loss = 0.0;
};

int cmd_train(const TrainOpts& o) {
  const auto field = read_patterns(o.patterns, nullptr);
  sr::RunConfig cfg;
  cfg.method = sr::RegMethod::none;
  cfg.hidden = o.hidden;
  cfg.mlp_seed = o.seed;
  cfg.split_seed = o.split_seed;
  cfg.scg.max_iters = o.max_iters;
  cfg.scg.target_loss = o.target_loss;
  cfg.max_attempts = 1;
  cfg.predict_volume = false;
  const auto result = sr::run_workflow(cfg, field);
  sr::save_model(o.out, result.model);
  const json report = sr::report_to_json(result.report);
  std::cout << sr::report_tables(report);
  if (!o.history.empty()) {
    std::ostringstream h;
    h.precision(17);
    h << "k,loss,lambda,delta,comparison,accepted\n";
    for (const auto& it : result.history.iterations) {
      h << it.k << ',' << it.loss << ',' << it.lambda << ',' << it.delta << ',' << it.comparison
        << ',' << it.accepted << '\n';
    }
    sr::write_file_text(o.history, h.str());
  }
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& vols, const std::string& out) {
  const auto model = sr::load_model(model_path);
  std::vector<sr::Volume> volumes;
  for (const auto& v : split_commas(vols)) volumes.push_back(sr::read_svol(v));
  std::vector<const sr::SeismicVolume*> ptrs;
  for (const auto& v : volumes) ptrs.push_back(&v);
  sr::write_svol(out, sr::predict_volume(model, ptrs));
  return 0;
}

int cmd_filter(const std::string& in, const std::string& out, int window, bool fill) {
  const auto vol = sr::read_svol(in);
  sr::write_svol(out, sr::median_filter_3d(vol, {window, fill}));
  return 0;
}

int cmd_slice(const std::string& in, std::int32_t il, const std::string& out) {
  emit(out, sr::inline_slice_csv(sr::read_svol(in), il));
  return 0;
}

int cmd_run(const ConfigOpts& o) {
  auto sets = o.sets;
  if (!o.out.empty()) sets.push_back("out_dir=" + o.out);
  const auto cfg = sr::load_run_config(o.config, sets);
  const auto result = sr::run_workflow(cfg);
  if (!cfg.out_dir.empty()) sr::write_run_outputs(cfg, result);
  std::cout << sr::report_tables(sr::report_to_json(result.report));
  return 0;
}

int cmd_report(const std::string& in, bool csv) {
  json report;
  try {
    report = json::parse(sr::read_file_text(in));
  } catch (const json::exception& e) {
    throw sr::Error(sr::ErrorKind::ConfigError, std::string("malformed report: ") + e.what());
  }
  std::cout << (csv ? sr::validation_csv(report) : sr::report_tables(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seismic attribute to sand-fraction prediction with target regularization"};
  app.require_subcommand(1);

  ConvertOpts conv;
  auto* convert = app.add_subcommand("convert", "SEG-Y to .svol; normalize a LAS file; describe an .svol");
  convert->add_option("--in", conv.in)->required();
  convert->add_option("--out", conv.out);
  convert->add_option("--name", conv.name, "Attribute name stored in the .svol");
  convert->add_option("--inline-byte", conv.inline_byte)->capture_default_str();
  convert->add_option("--xline-byte", conv.xline_byte)->capture_default_str();

  sr::SynthFieldParams sp;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate the synthetic benchmark field");
  synth->add_option("--seed", sp.seed)->capture_default_str();
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--inlines", sp.n_inlines)->capture_default_str();
  synth->add_option("--xlines", sp.n_xlines)->capture_default_str();
  synth->add_option("--samples", sp.n_samples)->capture_default_str();
  synth->add_option("--layers", sp.layer_count)->capture_default_str();
  synth->add_option("--thickness-ms", sp.mean_thickness_ms)->capture_default_str();
  synth->add_option("--wavelet-hz", sp.wavelet_hz)->capture_default_str();
  synth->add_option("--noise", sp.noise)->capture_default_str();

  ConfigOpts prep_o;
  auto* prep = app.add_subcommand("prep", "Build the per-well pattern table (CSV)");
  prep->add_option("--config", prep_o.config)->required();
  prep->add_option("--set", prep_o.sets, "key=value override");
  prep->add_option("--out", prep_o.out, "Output CSV (default stdout)");

  std::string met_patterns, met_csv;
  int met_bins = sr::kDefaultMiBins;
  auto* metrics = app.add_subcommand("metrics", "Spectral entropy and NMI tables for a pattern file");
  metrics->add_option("--patterns", met_patterns)->required();
  metrics->add_option("--bins", met_bins)->capture_default_str();
  metrics->add_option("--csv", met_csv);

  RegOpts reg_o;
  auto* regularize = app.add_subcommand("regularize", "Regularize the target column of a pattern file");
  regularize->add_option("--patterns", reg_o.patterns)->required();
  regularize->add_option("--out", reg_o.out);
  regularize->add_option("--report", reg_o.report, "JSON report path");
  regularize->add_option("--method", reg_o.method)->capture_default_str();
  regularize->add_option("--zeta-max", reg_o.zeta, "FT cutoff in Hz (0 = from predictor)");
  regularize->add_option("--wavelet", reg_o.wavelet)->capture_default_str();
  regularize->add_option("--levels", reg_o.levels)->capture_default_str();
  regularize->add_option("--truncate", reg_o.truncate, "Detail levels to zero, e.g. 1,2,3");
  regularize->add_option("--mode", reg_o.mode)->capture_default_str();
  regularize->add_option("--p1", reg_o.p1)->capture_default_str();
  regularize->add_option("--sd", reg_o.sd)->capture_default_str();
  regularize->add_option("--span", reg_o.span)->capture_default_str();
  regularize->add_option("--tol", reg_o.tol)->capture_default_str();

  std::string emd_patterns, emd_well, emd_column, emd_out;
  double emd_sd = 0.2;
  auto* emd_dump = app.add_subcommand("emd-dump", "Write the IMFs and residue of one series as CSV");
  emd_dump->add_option("--patterns", emd_patterns)->required();
  emd_dump->add_option("--well", emd_well)->required();
  emd_dump->add_option("--column", emd_column, "Column to decompose (default: target)");
  emd_dump->add_option("--sd", emd_sd)->capture_default_str();
  emd_dump->add_option("--out", emd_out);

  TrainOpts tr_o;
  auto* train = app.add_subcommand("train", "Train the MLP on a pattern file");
  train->add_option("--patterns", tr_o.patterns)->required();
  train->add_option("--out", tr_o.out)->required();
  train->add_option("--hidden", tr_o.hidden)->capture_default_str();
  train->add_option("--max-iters", tr_o.max_iters)->capture_default_str();
  train->add_option("--seed", tr_o.seed)->capture_default_str();
  train->add_option("--split-seed", tr_o.split_seed)->capture_default_str();
  train->add_option("--target-loss", tr_o.target_loss)->capture_default_str();
  train->add_option("--history", tr_o.history, "Write the SCG iteration history as CSV");

  std::string pr_model, pr_vols, pr_out;
  auto* predict = app.add_subcommand("predict", "Apply a model to attribute volumes");
  predict->add_option("--model", pr_model)->required();
  predict->add_option("--vol", pr_vols, "Comma-separated .svol files in model input order")->required();
  predict->add_option("--out", pr_out)->required();

  std::string fi_in, fi_out;
  int fi_window = 3;
  bool fi_fill = false;
  auto* filter = app.add_subcommand("filter", "3-D median filter an .svol volume");
  filter->add_option("--in", fi_in)->required();
  filter->add_option("--out", fi_out)->required();
  filter->add_option("--window", fi_window)->capture_default_str();
  filter->add_flag("--fill-missing", fi_fill, "Also fill masked voxels from valid neighbors");

  std::string sl_in, sl_out;
  std::int32_t sl_inline = 0;
  auto* slice = app.add_subcommand("slice", "Emit one inline section as a CSV grid");
  slice->add_option("--in", sl_in)->required();
  slice->add_option("--inline", sl_inline)->required();
  slice->add_option("--out", sl_out);

  ConfigOpts run_o;
  auto* run = app.add_subcommand("run", "Run the full workflow from a config file");
  run->add_option("--config", run_o.config)->required();
  run->add_option("--set", run_o.sets, "key=value override");
  run->add_option("--out", run_o.out, "Output directory (overrides out_dir)");

  std::string rep_in;
  bool rep_csv = false;
  auto* report = app.add_subcommand("report", "Print the tables of a run report");
  report->add_option("--in", rep_in)->required();
  report->add_flag("--csv", rep_csv, "Validation table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*convert) return cmd_convert(conv);
    if (*synth) return cmd_synth(sp, synth_out);
    if (*prep) return cmd_prep(prep_o);
    if (*metrics) return cmd_metrics(met_patterns, met_bins, met_csv);
    if (*regularize) return cmd_regularize(reg_o);
    if (*emd_dump) return cmd_emd_dump(emd_patterns, emd_well, emd_column, emd_sd, emd_out);
    if (*train) return cmd_train(tr_o);
    if (*predict) return cmd_predict(pr_model, pr_vols, pr_out);
    if (*filter) return cmd_filter(fi_in, fi_out, fi_window, fi_fill);
    if (*slice) return cmd_slice(sl_in, sl_inline, sl_out);
    if (*run) return cmd_run(run_o);
    if (*report) return cmd_report(rep_in, rep_csv);
  } catch (const sr::Error& e) {
    std::cerr << "seisreg: " << e.what() << "\n";
    switch (sr::category(e.kind())) {
      case sr::ErrorCategory::config: return kExitConfig;
      case sr::ErrorCategory::numeric: return kExitNumeric;
      case sr::ErrorCategory::data: return kExitData;
    }
  } catch (const std::exception& e) {
    std::cerr << "seisreg: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
