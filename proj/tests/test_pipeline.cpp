#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "seisreg/pipeline.hpp"
#include "seisreg/synthbench.hpp"
#include "support.hpp"

using namespace seisreg;
using testkit::kind_of;

namespace {

SynthFieldParams two_well_params() {
  SynthFieldParams p;
  p.n_inlines = 12;
  p.n_xlines = 18;
  p.n_samples = 161;
  p.layer_count = 140;
  p.log_base_ms = 2100.0;
  return p;
}

// one generated field per test binary
const std::filesystem::path& two_well_dir() {
  static const std::filesystem::path dir = [] {
    auto d = testkit::scratch_dir("pipeline_field");
    write_field(generate_field(two_well_params()), d);
    return d;
  }();
  return dir;
}

RunConfig small_config(const std::vector<std::string>& overrides = {}) {
  std::vector<std::string> o = {"scg.max_iters=60", "retrain.max_attempts=1"};
  o.insert(o.end(), overrides.begin(), overrides.end());
  return load_run_config(two_well_dir() / "field.cfg", o);
}

// numbers compare to a relative tolerance, everything else exactly
void compare_json(const nlohmann::json& got, const nlohmann::json& want, const std::string& path) {
  INFO("at " << path);
  if (want.is_number() && got.is_number()) {
    const double g = got.get<double>(), w = want.get<double>();
    CHECK(std::abs(g - w) <= 1e-6 * std::max(1.0, std::abs(w)));
    return;
  }
  REQUIRE(got.type() == want.type());
  if (want.is_object()) {
    CHECK(got.size() == want.size());
    for (auto it = want.begin(); it != want.end(); ++it) {
      REQUIRE(got.contains(it.key()));
      compare_json(got[it.key()], it.value(), path + "." + it.key());
    }
  } else if (want.is_array()) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) compare_json(got[i], want[i], path + "[" + std::to_string(i) + "]");
  } else {
    CHECK(got == want);
  }
}

}  // namespace

TEST_CASE("moving average baseline") {
  std::vector<double> impulse(21, 0.0);
  impulse[10] = 1.0;
  const auto y = moving_average_baseline(impulse, 9);
  for (std::size_t i = 0; i < 21; ++i) CHECK(y[i] == doctest::Approx(i >= 6 && i <= 14 ? 1.0 / 9.0 : 0.0));
  const std::vector<double> flat(12, 2.5);
  CHECK(moving_average_baseline(flat, 9) == flat);
  const std::vector<double> ramp = {1, 2, 3, 4, 5};
  const auto r = moving_average_baseline(ramp, 3);
  CHECK(r == std::vector<double>{1.5, 2, 3, 4, 4.5});
  CHECK(kind_of([&] { moving_average_baseline(ramp, 7); }) == ErrorKind::SpanTooLarge);  // length + 2
  CHECK(kind_of([&] { moving_average_baseline(ramp, 2); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("good fit thresholds") {
  MetricsReport m;
  m.cc = 0.85;
  m.rmse = 0.1;
  m.aem = 0.08;
  m.si = 0.3;
  CHECK(good_fit(m));
  auto bad = m;
  bad.cc = 0.8;
  CHECK_FALSE(good_fit(bad));
  bad = m;
  bad.rmse = 0.15;
  CHECK_FALSE(good_fit(bad));
  bad = m;
  bad.si = 0.35;
  CHECK_FALSE(good_fit(bad));
  bad = m;
  bad.si_defined = false;
  CHECK_FALSE(good_fit(bad));
}

TEST_CASE("tightening steps") {
  RegSettings s;
  CHECK_FALSE(s.tightened(1000));
  s.method = RegMethod::avg9;
  CHECK_FALSE(s.tightened(1000));

  s.method = RegMethod::ft;
  CHECK(s.tightened(1000)->ft_zeta_scale == doctest::Approx(0.8));
  CHECK(s.tightened(1000)->tightened(1000)->ft_zeta_scale == doctest::Approx(0.64));

  s.method = RegMethod::wd;
  s.wd = {"db4", 3, {1, 2}};
  auto t = s.tightened(1000);
  CHECK(t->wd.levels == 3);
  CHECK(t->wd.truncate_details == std::vector<int>{1, 2, 3});
  t = t->tightened(1000);
  CHECK(t->wd.levels == 4);
  CHECK(t->wd.truncate_details == std::vector<int>{1, 2, 3, 4});
  CHECK_FALSE(t->tightened(16));

  s.method = RegMethod::emd;
  s.emd_p1 = 2;
  CHECK(s.tightened(1000)->emd_p1 == 3);
}

TEST_CASE("pattern csv round trip") {
  FieldData f;
  f.predictor_names = {"imp", "amp"};
  for (int w = 0; w < 2; ++w) {
    WellData d;
    d.name = "W" + std::to_string(w + 1);
    d.target = {1800.0 + w, 0.15, testkit::random_signal(20, 40 + w, 0, 1)};
    d.predictors = {{1800.0 + w, 0.15, testkit::random_signal(20, 50 + w)},
                    {1800.0 + w, 0.15, testkit::random_signal(20, 60 + w)}};
    f.wells.push_back(d);
  }
  const auto csv = patterns_csv(f, "SF");
  std::string target;
  const auto back = field_from_patterns_csv(csv, &target);
  CHECK(target == "SF");
  CHECK(back.predictor_names == f.predictor_names);
  REQUIRE(back.wells.size() == 2);
  CHECK(back.wells[1].target.values == f.wells[1].target.values);
  CHECK(back.wells[1].target.t0_ms == 1801.0);
  CHECK(back.wells[0].target.dt_ms == doctest::Approx(0.15));
  const auto again = field_from_patterns_csv(patterns_csv(back, "SF"));
  CHECK(again.wells[1].predictors[1].values == f.wells[1].predictors[1].values);

  CHECK(kind_of([] { field_from_patterns_csv("well,time_ms,a,b\nW1,0,1\n"); }) == ErrorKind::RaggedRow);
  CHECK(kind_of([] { field_from_patterns_csv("w,t,a,b\n"); }) == ErrorKind::MalformedLas);
  CHECK(kind_of([] { field_from_patterns_csv("well,time_ms,a,b\nW1,0,1,2\nW2,0,1,2\nW1,1,1,2\n"); }) ==
        ErrorKind::MalformedLas);
  CHECK(kind_of([] { field_from_patterns_csv("well,time_ms,a,b\nW1,0,1,2\nW1,1,1,2\nW1,3,1,2\n"); }) ==
        ErrorKind::MalformedLas);
}

TEST_CASE("loaded field: wells on the log grid, broadband target") {
  const auto cfg = small_config();
  const auto field = load_field(cfg);
  CHECK(field.predictor_names == std::vector<std::string>{"imp", "amp", "freq"});
  REQUIRE(field.wells.size() == 2);
  for (const auto& w : field.wells) {
    CHECK(w.target.dt_ms == doctest::Approx(0.15));
    REQUIRE(w.predictors.size() == 3);
    for (const auto& p : w.predictors) {
      CHECK(p.size() == w.target.size());
      CHECK(p.t0_ms == w.target.t0_ms);
    }
  }
}

TEST_CASE("small end-to-end run") {
  const auto cfg = small_config({"method=wd", "predict.slice_inline=124"});
  const auto r = run_workflow(cfg);
  const auto& rep = r.report;
  REQUIRE(rep.attempts.size() == 1);
  CHECK(rep.stop_reason != "");
  const auto& a = rep.final_attempt();
  CHECK(a.n_train + a.n_test + a.n_validation > 0);
  CHECK(a.validation.size() == 2);
  CHECK(a.train.iterations == 60);
  for (const auto& row : a.entropy) {
    for (double h : row.h_predictors) CHECK(row.h_raw > h);
    CHECK(row.h_regularized < row.h_raw);
  }
  REQUIRE(r.prediction);
  REQUIRE(r.filtered);
  CHECK(rep.volume->valid_voxels == r.prediction->data.size());

  // outputs land on disk and the model reloads to the same predictions
  auto out_cfg = cfg;
  out_cfg.out_dir = testkit::scratch_dir("pipeline_out").string();
  write_run_outputs(out_cfg, r);
  for (const char* name : {"report.json", "report.txt", "validation.csv", "entropy.csv", "history.csv",
                           "model.json", "resolved.cfg"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(out_cfg.out_dir) / name));
  }
  const auto reloaded = load_model(std::filesystem::path(out_cfg.out_dir) / "model.json");
  const std::vector<double> x = {6000.0, 10.0, 30.0};
  CHECK(reloaded.predict(x) == doctest::Approx(r.model.predict(x)).epsilon(1e-12));
}

TEST_CASE("the same configuration reproduces the golden report") {
  const auto cfg = small_config({"method=ft", "predict.volume=false"});
  const auto got = report_to_json(run_workflow(cfg).report);
  const auto path = std::filesystem::path(SEISREG_GOLDEN_DIR) / "small_run_report.json";
  if (std::getenv("SEISREG_UPDATE_GOLDEN")) {
    std::filesystem::create_directories(path.parent_path());
    write_file_text(path, got.dump(2) + "\n");
  }
  REQUIRE_MESSAGE(std::filesystem::exists(path), "golden report missing; rerun with SEISREG_UPDATE_GOLDEN=1");
  compare_json(got, nlohmann::json::parse(read_file_text(path)), "$");
}

TEST_CASE("retry loop tightens until it runs out of attempts") {
  // an unreachable threshold forces every attempt
  const auto cfg = small_config({"method=ft", "retrain.max_attempts=3", "retrain.cc_threshold=1.01",
                                 "predict.volume=false", "scg.max_iters=10"});
  const auto rep = run_workflow(cfg).report;
  REQUIRE(rep.attempts.size() == 3);
  CHECK(rep.stop_reason == "max_attempts");
  CHECK(rep.selected == 2);
  CHECK(rep.attempts[2].settings.ft_zeta_scale == doctest::Approx(0.64));

  const auto none = run_workflow(small_config({"method=none", "retrain.max_attempts=3",
                                               "retrain.cc_threshold=1.01", "predict.volume=false",
                                               "scg.max_iters=10"}))
                        .report;
  CHECK(none.attempts.size() == 1);
  CHECK(none.stop_reason == "no_tightening");
}
