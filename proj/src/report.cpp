// Run report serialization and the tabular views derived from it.

#include <cmath>
#include <cstdio>
#include <sstream>

#include "seisreg/error.hpp"
#include "seisreg/pipeline.hpp"
#include "seisreg/volpost.hpp"

namespace seisreg {

using nlohmann::json;

namespace {

json metrics_json(const MetricsRow& r) {
  auto opt = [](bool defined, double v) { return defined ? json(v) : json(nullptr); };
  return {{"label", r.label},
          {"n", r.n},
          {"cc", opt(r.metrics.cc_defined, r.metrics.cc)},
          {"rmse", r.metrics.rmse},
          {"aem", r.metrics.aem},
          {"si", opt(r.metrics.si_defined, r.metrics.si)},
          {"good_fit", r.good_fit}};
}

std::string cell(const json& v, int width, int precision = 4) {
  char buf[64];
  if (v.is_null()) {
    std::snprintf(buf, sizeof buf, "%*s", width, "undef");
  } else if (v.is_boolean()) {
    std::snprintf(buf, sizeof buf, "%*s", width, v.get<bool>() ? "pass" : "FAIL");
  } else if (v.is_number()) {
    std::snprintf(buf, sizeof buf, "%*.*f", width, precision, v.get<double>());
  } else {
    std::snprintf(buf, sizeof buf, "%*s", width, v.get<std::string>().c_str());
  }
  return buf;
}

std::string csv_num(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
  return buf;
}

const json& selected_attempt(const json& report) {
  return report.at("attempts").at(report.at("selected").get<std::size_t>());
}

}  // namespace

json report_to_json(const RunReport& r) {
  json j;
  j["format"] = "seisreg-run-report";
  j["version"] = 1;
  j["config"] = r.config;
  j["predictors"] = r.predictor_names;
  j["selected"] = r.selected;
  j["stop_reason"] = r.stop_reason;
  json attempts = json::array();
  for (const Attempt& a : r.attempts) {
    json ja;
    ja["index"] = a.index;
    ja["regularization"] = a.settings.to_json();
    ja["wells"] = a.well_details;
    json ent = json::array();
    for (const EntropyRow& e : a.entropy) {
      ent.push_back({{"well", e.well},
                     {"h_raw", e.h_raw},
                     {"h_regularized", e.h_regularized},
                     {"h_predictors", e.h_predictors},
                     {"nmi_raw", e.nmi_raw},
                     {"nmi_regularized", e.nmi_regularized}});
    }
    ja["entropy"] = ent;
    ja["patterns"] = {{"train", a.n_train}, {"test", a.n_test}, {"validation", a.n_validation}};
    ja["training"] = {{"iterations", a.train.iterations},
                      {"accepted", a.train.accepted},
                      {"final_loss", a.train.final_loss},
                      {"termination", a.train.termination}};
    ja["test"] = metrics_json(a.test);
    json val = json::array();
    for (const MetricsRow& m : a.validation) val.push_back(metrics_json(m));
    ja["validation"] = val;
    ja["validation_pooled"] = metrics_json(a.validation_pooled);
    ja["meets_threshold"] = a.meets_threshold;
    attempts.push_back(std::move(ja));
  }
  j["attempts"] = attempts;
  if (r.volume) {
    j["volume"] = {{"valid_voxels", r.volume->valid_voxels},
                   {"mean", r.volume->mean},
                   {"min", r.volume->min},
                   {"max", r.volume->max},
                   {"filtered_mean", r.volume->filtered_mean}};
  } else {
    j["volume"] = nullptr;
  }
  return j;
}

std::string report_tables(const json& report) {
  std::ostringstream out;
  const auto names = report.at("predictors").get<std::vector<std::string>>();
  const json& a = selected_attempt(report);

  out << "Regularization: " << a.at("regularization").dump() << "\n";
  out << "Attempts: " << report.at("attempts").size() << " (selected " << a.at("index")
      << ", stopped: " << report.value("stop_reason", std::string("?")) << ")\n";
  for (const json& at : report.at("attempts")) {
    out << "  attempt " << at.at("index") << ": validation CC "
        << cell(at.at("validation_pooled").at("cc"), 0) << ", "
        << (at.at("meets_threshold").get<bool>() ? "meets" : "below") << " threshold\n";
  }

  out << "\nSPECTRAL ENTROPY (bits)\n";
  out << cell("Well", 8) << cell("raw", 10) << cell("regul.", 10);
  for (const auto& n : names) out << cell(n.substr(0, 10), 11);
  out << "\n";
  for (const json& e : a.at("entropy")) {
    out << cell(e.at("well"), 8) << cell(e.at("h_raw"), 10) << cell(e.at("h_regularized"), 10);
    for (const json& h : e.at("h_predictors")) out << cell(h, 11);
    out << "\n";
  }

  out << "\nNORMALIZED MUTUAL INFORMATION (predictor vs target)\n";
  out << cell("Well", 8) << cell("Target", 8);
  for (const auto& n : names) out << cell(n.substr(0, 10), 11);
  out << "\n";
  for (const json& e : a.at("entropy")) {
    out << cell(e.at("well"), 8) << cell("raw", 8);
    for (const json& v : e.at("nmi_raw")) out << cell(v, 11);
    out << "\n" << cell("", 8) << cell("regul.", 8);
    for (const json& v : e.at("nmi_regularized")) out << cell(v, 11);
    out << "\n";
  }

  auto metrics_line = [&](const json& m) {
    out << cell(m.at("label"), 8) << cell(m.at("n"), 6, 0) << cell(m.at("cc"), 9)
        << cell(m.at("rmse"), 9) << cell(m.at("aem"), 9) << cell(m.at("si"), 9)
        << cell(m.at("good_fit"), 7) << "\n";
  };
  out << "\nSTATISTICS OF TEST PERFORMANCE\n";
  out << cell("Set", 8) << cell("N", 6) << cell("CC", 9) << cell("RMSE", 9) << cell("AEM", 9)
      << cell("SI", 9) << cell("Fit", 7) << "\n";
  metrics_line(a.at("test"));

  out << "\nSTATISTICS OF VALIDATION PERFORMANCE\n";
  out << cell("Well", 8) << cell("N", 6) << cell("CC", 9) << cell("RMSE", 9) << cell("AEM", 9)
      << cell("SI", 9) << cell("Fit", 7) << "\n";
  std::size_t passing = 0;
  for (const json& m : a.at("validation")) {
    metrics_line(m);
    passing += m.at("good_fit").get<bool>() ? 1 : 0;
  }
  metrics_line(a.at("validation_pooled"));
  out << "\nGood fit (CC > 0.80, RMSE < 0.15, AEM < 0.15, SI < 0.35): " << passing << " of "
      << a.at("validation").size() << " wells\n";

  if (!report.at("volume").is_null()) {
    const json& v = report.at("volume");
    out << "\nVolume prediction: " << v.at("valid_voxels") << " voxels, mean "
        << cell(v.at("mean"), 0) << ", range [" << cell(v.at("min"), 0) << ", "
        << cell(v.at("max"), 0) << "], median-filtered mean " << cell(v.at("filtered_mean"), 0)
        << "\n";
  }
  return out.str();
}

std::string validation_csv(const json& report) {
  std::ostringstream out;
  out << "well,n,cc,rmse,aem,si,good_fit\n";
  const json& a = selected_attempt(report);
  auto line = [&](const json& m) {
    out << csv_num(m.at("label")) << ',' << m.at("n").get<std::size_t>() << ',' << csv_num(m.at("cc"))
        << ',' << csv_num(m.at("rmse")) << ',' << csv_num(m.at("aem")) << ',' << csv_num(m.at("si"))
        << ',' << csv_num(m.at("good_fit")) << '\n';
  };
  for (const json& m : a.at("validation")) line(m);
  line(a.at("validation_pooled"));
  return out.str();
}

std::string entropy_csv(const json& report) {
  std::ostringstream out;
  const auto names = report.at("predictors").get<std::vector<std::string>>();
  out << "well,h_raw,h_regularized";
  for (const auto& n : names) out << ",h_" << n;
  for (const auto& n : names) out << ",nmi_raw_" << n;
  for (const auto& n : names) out << ",nmi_regularized_" << n;
  out << '\n';
  for (const json& e : selected_attempt(report).at("entropy")) {
    out << csv_num(e.at("well")) << ',' << csv_num(e.at("h_raw")) << ','
        << csv_num(e.at("h_regularized"));
    for (const char* key : {"h_predictors", "nmi_raw", "nmi_regularized"}) {
      for (const json& v : e.at(key)) out << ',' << csv_num(v);
    }
    out << '\n';
  }
  return out.str();
}

void write_run_outputs(const RunConfig& cfg, const RunResult& result) {
  if (cfg.out_dir.empty()) throw Error(ErrorKind::ConfigError, "out_dir is not set");
  const std::filesystem::path dir = cfg.out_dir;
  std::filesystem::create_directories(dir);

  const json report = report_to_json(result.report);
  write_file_text(dir / "report.json", report.dump(2) + "\n");
  write_file_text(dir / "report.txt", report_tables(report));
  write_file_text(dir / "validation.csv", validation_csv(report));
  write_file_text(dir / "entropy.csv", entropy_csv(report));
  write_file_text(dir / "resolved.cfg", format_key_values(resolved_key_values(cfg)));
  save_model(dir / "model.json", result.model);

  std::ostringstream hist;
  hist.precision(17);
  hist << "k,loss,lambda,lambda_bar,delta,mu,alpha,comparison,accepted,restarted\n";
  for (const auto& it : result.history.iterations) {
    hist << it.k << ',' << it.loss << ',' << it.lambda << ',' << it.lambda_bar << ',' << it.delta
         << ',' << it.mu << ',' << it.alpha << ',' << it.comparison << ',' << it.accepted << ','
         << it.restarted << '\n';
  }
  write_file_text(dir / "history.csv", hist.str());

  if (result.prediction) write_svol(dir / "sf_pred.svol", *result.prediction);
  if (result.filtered) write_svol(dir / "sf_pred_med.svol", *result.filtered);
  if (result.filtered && cfg.slice_inline != 0) {
    write_file_text(dir / ("slice_il" + std::to_string(cfg.slice_inline) + ".csv"),
                    inline_slice_csv(*result.filtered, cfg.slice_inline));
  }
}

}  // namespace seisreg
