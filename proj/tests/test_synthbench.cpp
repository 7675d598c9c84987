#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seisreg/config.hpp"
#include "seisreg/synthbench.hpp"
#include "support.hpp"

using namespace seisreg;
using testkit::kind_of;

namespace {

SynthFieldParams small() {
  SynthFieldParams p;
  p.n_inlines = 6;
  p.n_xlines = 7;
  p.n_samples = 161;
  p.layer_count = 140;
  p.log_base_ms = 2100.0;
  return p;
}

}  // namespace

TEST_CASE("ricker wavelet shape") {
  CHECK(ricker(0.0, 30.0) == 1.0);
  CHECK(ricker(0.01, 30.0) == doctest::Approx(ricker(-0.01, 30.0)));
  // zero crossings at t = +-1/(pi f sqrt 2)
  CHECK(std::abs(ricker(1.0 / (std::numbers::pi * 30.0 * std::sqrt(2.0)), 30.0)) < 1e-12);
}

TEST_CASE("field generation is deterministic in the seed") {
  const auto a = generate_field(small());
  const auto b = generate_field(small());
  CHECK(a.amplitude == b.amplitude);
  CHECK(a.frequency == b.frequency);
  CHECK(a.wells.front().las == b.wells.front().las);
  auto p = small();
  p.seed = 8;
  CHECK_FALSE(generate_field(p).impedance == a.impedance);
}

TEST_CASE("field geometry, wells and value ranges") {
  const auto f = generate_field(small());
  CHECK(f.impedance.geometry.n_inlines() == 6);
  CHECK(f.impedance.geometry.n_xlines() == 7);
  CHECK(f.impedance.geometry.n_samples == 161);
  CHECK(f.impedance.geometry == f.sand_fraction.geometry);
  // only the first well site fits on a 6 x 7 grid
  REQUIRE(f.wells.size() == 1);
  const auto& w = f.wells.front();
  CHECK(w.inline_no == 124);
  CHECK(w.xline_no == 205);
  for (double v : f.sand_fraction.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  const auto sf = w.las.curve_index("SF");
  REQUIRE(sf);
  for (const auto& row : w.las.rows) {
    CHECK(*row[*sf] >= 0.0);
    CHECK(*row[*sf] <= 1.0);
  }
  // the log spans the configured time window
  CHECK(w.velocity.time_at(*w.las.rows.front()[0]) >= 1800.0 - 1e-6);
  CHECK(w.velocity.time_at(*w.las.rows.back()[0]) <= 2100.0 + 1e-6);
  CHECK(w.velocity.time_at(*w.las.rows.back()[0]) > 2099.0);
}

TEST_CASE("a single noiseless layer gives a flat field and no reflections") {
  auto p = small();
  p.layer_count = 1;
  p.noise = 0.0;
  const auto f = generate_field(p);
  for (double v : f.sand_fraction.data) CHECK(v == f.sand_fraction.data.front());
  for (double v : f.amplitude.data) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("parameter validation") {
  auto p = small();
  p.log_base_ms = 5000.0;
  CHECK(kind_of([&] { generate_field(p); }) == ErrorKind::InvalidParameter);
  p = small();
  p.wavelet_hz = 300.0;
  CHECK(kind_of([&] { generate_field(p); }) == ErrorKind::InvalidParameter);
  p = small();
  p.layer_count = 0;
  CHECK(kind_of([&] { p.validate(); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("write_field produces a loadable configuration") {
  const auto dir = testkit::scratch_dir("synth_write");
  const auto f = generate_field(small());
  write_field(f, dir);
  for (const char* name : {"impedance.svol", "amplitude.svol", "frequency.svol", "sf_truth.svol", "W1.las",
                           "W1_velocity.csv", "field.cfg"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  CHECK(read_svol(dir / "amplitude.svol") == f.amplitude);
  CHECK(parse_las(read_file_text(dir / "W1.las")).rows.size() == f.wells[0].las.rows.size());
  const auto cfg = load_run_config(dir / "field.cfg");
  CHECK(cfg.volumes.size() == 3);
  CHECK(cfg.logs == std::vector<std::string>{"W1.las"});
  CHECK_NOTHROW(cfg.validate());
}
