#include <doctest.h>

#include <bit>
#include <cmath>

#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"
#include "support.hpp"

using namespace seisreg;
using testkit::kind_of;

namespace {

// independent decoder: sign, base-16 exponent biased by 64, 24-bit fraction
double ibm_formula(std::uint32_t w) {
  const double sign = (w >> 31) ? -1.0 : 1.0;
  const int e = static_cast<int>((w >> 24) & 0x7F) - 64;
  const double f = static_cast<double>(w & 0xFFFFFF) / 16777216.0;
  return sign * std::pow(16.0, e) * f;
}

using testkit::kLas;

}  // namespace

TEST_CASE("ibm_to_ieee decodes the reference patterns") {
  CHECK(ibm_to_ieee(0x00000000u) == 0.0);
  CHECK(ibm_to_ieee(0x41100000u) == 1.0);
  CHECK(ibm_to_ieee(0xC2760000u) == -118.0);
  CHECK(ibm_to_ieee(0x7F000000u) == 0.0);  // zero fraction, any exponent
}

TEST_CASE("ibm_to_ieee matches the textbook formula exactly") {
  Rng rng(11);
  for (int i = 0; i < 20000; ++i) {
    const auto w = static_cast<std::uint32_t>(rng.next());
    CHECK(ibm_to_ieee(w) == ibm_formula(w));
  }
}

TEST_CASE("IBM encoder and decoder agree on 24-bit fractions") {
  for (double v : {1.0, -1.0, 0.5, 118.0, -118.0, 3.140625, 1e-5, 65535.0, -0.001}) {
    const double back = ibm_to_ieee(testkit::ibm_encode(v));
    CHECK(back == doctest::Approx(v).epsilon(1e-6));
  }
}

TEST_CASE("parse_segy reads a format-5 fixture") {
  const auto bytes = testkit::build_segy({{1, 1, {0.0, 1.0, -1.0, 0.5}}}, 5, 2000);
  const auto raw = parse_segy(bytes);
  REQUIRE(raw.traces.size() == 1);
  CHECK(raw.binary_header.format_code == 5);
  CHECK(raw.binary_header.samples_per_trace == 4);
  CHECK(raw.traces[0].samples == std::vector<double>{0.0, 1.0, -1.0, 0.5});
  CHECK(raw.textual_header[0] == 0x40);
}

TEST_CASE("IBM and IEEE encodings of the same samples agree") {
  std::vector<testkit::FixtureTrace> traces;
  Rng rng(3);
  for (int il = 1; il <= 3; ++il) {
    for (int xl = 1; xl <= 4; ++xl) {
      testkit::FixtureTrace t{il, xl, {}};
      for (int s = 0; s < 50; ++s) t.samples.push_back(static_cast<float>(rng.uniform(-1e4, 1e4)));
      traces.push_back(t);
    }
  }
  const auto a = volume_from_traces(parse_segy(testkit::build_segy(traces, 1, 4000)));
  const auto b = volume_from_traces(parse_segy(testkit::build_segy(traces, 5, 4000)));
  REQUIRE(a.geometry == b.geometry);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    CHECK(std::abs(a.data[i] - b.data[i]) <= 1e-6 * std::abs(b.data[i]) + 1e-30);
  }
}

TEST_CASE("parse_segy honours custom header byte offsets and the delay") {
  const auto bytes = testkit::build_segy({{7, 9, {1.0, 2.0}}}, 5, 1000, 1500, 9, 21);
  const auto raw = parse_segy(bytes, {9, 21});
  CHECK(raw.traces[0].inline_no == 7);
  CHECK(raw.traces[0].xline_no == 9);
  const auto v = volume_from_traces(raw);
  CHECK(v.geometry.t0_ms == 1500.0);
  CHECK(v.geometry.dt_ms == 1.0);
}

TEST_CASE("parse_segy error cases") {
  CHECK(kind_of([] { parse_segy(std::vector<std::uint8_t>(3599, 0)); }) == ErrorKind::TruncatedFile);

  auto bytes = testkit::build_segy({{1, 1, {1.0, 2.0, 3.0, 4.0}}}, 5, 2000);
  auto bad_fmt = bytes;
  testkit::put_be16(bad_fmt, 3224, 8);
  CHECK(kind_of([&] { parse_segy(bad_fmt); }) == ErrorKind::UnsupportedFormatCode);

  auto short_trace = bytes;
  short_trace.resize(short_trace.size() - 4);  // header says 4 samples, 3 present
  CHECK(kind_of([&] { parse_segy(short_trace); }) == ErrorKind::InconsistentTraceLength);

  CHECK(kind_of([&] { parse_segy(bytes, {0, 193}); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("volume_from_traces builds the closure grid with a mask") {
  SUBCASE("1x2") {
    const auto v = volume_from_traces(
        parse_segy(testkit::build_segy({{1, 1, {1.0}}, {1, 2, {2.0}}}, 5, 2000)));
    CHECK(v.geometry.n_inlines() == 1);
    CHECK(v.geometry.n_xlines() == 2);
    CHECK(v.at(0, 1, 0) == 2.0);
  }
  SUBCASE("diagonal traces leave the off-diagonal masked") {
    const auto v = volume_from_traces(
        parse_segy(testkit::build_segy({{1, 1, {1.0}}, {2, 2, {4.0}}}, 5, 2000)));
    CHECK(v.geometry.n_voxels() == 4);
    CHECK(v.is_valid(0, 0, 0));
    CHECK_FALSE(v.is_valid(0, 1, 0));
    CHECK_FALSE(v.is_valid(1, 0, 0));
    CHECK(v.is_valid(1, 1, 0));
    CHECK(v.at(0, 1, 0) == 0.0);
    CHECK_FALSE(v.trace(0, 1).has_value());
    CHECK(v.trace(1, 1)->values == std::vector<double>{4.0});
  }
  SUBCASE("duplicates") {
    const auto raw = parse_segy(testkit::build_segy({{1, 1, {1.0}}, {1, 1, {2.0}}}, 5, 2000));
    CHECK(kind_of([&] { volume_from_traces(raw); }) == ErrorKind::DuplicateTrace);
  }
  SUBCASE("empty") {
    CHECK(kind_of([] { volume_from_traces(SegyVolumeRaw{}); }) == ErrorKind::EmptyVolume);
  }
}

TEST_CASE("svol round trip is exact and byte-stable") {
  auto v = testkit::ramp_cube(3, 4, 5);
  v.data[7] = -1.25e-300;
  v.data[11] = 0.1;
  v.valid[13] = 0;
  v.data[13] = 0.0;
  const auto bytes = encode_svol(v);
  const auto back = decode_svol(bytes);
  CHECK(back == v);
  CHECK(encode_svol(back) == bytes);
  CHECK(bytes.size() == 64 + 4 * (3 + 4) + 4 + 60 * 9);

  const auto dir = testkit::scratch_dir("svol");
  write_svol(dir / "a.svol", v);
  CHECK(read_svol(dir / "a.svol") == v);
}

TEST_CASE("svol rejects damaged images") {
  const auto bytes = encode_svol(testkit::ramp_cube(2, 2, 3));
  auto truncated = bytes;
  truncated.pop_back();
  CHECK(kind_of([&] { decode_svol(truncated); }) == ErrorKind::TruncatedFile);
  auto magic = bytes;
  magic[0] = 'X';
  CHECK(kind_of([&] { decode_svol(magic); }) == ErrorKind::MalformedVolume);
  auto version = bytes;
  version[8] = 2;
  CHECK(kind_of([&] { decode_svol(version); }) == ErrorKind::MalformedVolume);
  CHECK(kind_of([] { decode_svol(std::vector<std::uint8_t>(10, 0)); }) == ErrorKind::TruncatedFile);
}

TEST_CASE("masked voxels are stored as zero") {
  auto v = testkit::ramp_cube(1, 1, 3);
  v.valid[1] = 0;
  const auto back = decode_svol(encode_svol(v));
  CHECK(back.data[1] == 0.0);
  CHECK(back.valid[1] == 0);
}

TEST_CASE("parse_las reads the minimal fixture") {
  const auto log = parse_las(kLas);
  CHECK(log.curves.size() == 2);
  CHECK(log.rows.size() == 3);
  CHECK(log.curves[1].mnemonic == "SF");
  CHECK(log.curves[1].unit == "V/V");
  CHECK(*log.rows[0][1] == 0.25);
  CHECK_FALSE(log.rows[1][1].has_value());
  CHECK(log.curve_index("sf") == 1u);
  CHECK(log.meta_number("strt") == 1000.0);
  CHECK(log.well_meta.at("WELL").value == "A-1");
}

TEST_CASE("LAS write/parse round trip") {
  const auto log = parse_las(kLas);
  const auto text = write_las(log);
  const auto again = parse_las(text);
  CHECK(again == log);
  CHECK(write_las(again) == text);
}

TEST_CASE("parse_las error cases") {
  std::string ragged = kLas;
  ragged += " 1001.5\n";
  CHECK(kind_of([&] { parse_las(ragged); }) == ErrorKind::RaggedRow);

  std::string no_v = kLas;
  no_v.replace(no_v.find("~VERSION"), 8, "~OTHERXX");
  CHECK(kind_of([&] { parse_las(no_v); }) == ErrorKind::MissingSection);

  std::string v3 = kLas;
  v3.replace(v3.find("2.0 :"), 3, "3.0");
  CHECK(kind_of([&] { parse_las(v3); }) == ErrorKind::VersionUnsupported);

  std::string wrap = kLas;
  wrap.replace(wrap.find("NO  :"), 3, "YES");
  CHECK(kind_of([&] { parse_las(wrap); }) == ErrorKind::VersionUnsupported);

  std::string junk = kLas;
  junk += " 1001.5 abc\n";
  CHECK(kind_of([&] { parse_las(junk); }) == ErrorKind::MalformedLas);

  std::string unsorted = kLas;
  unsorted += " 1000.2 0.1\n";
  CHECK(kind_of([&] { parse_las(unsorted); }) == ErrorKind::MalformedLas);

  const std::string no_a = std::string(kLas).substr(0, std::string(kLas).find("~ASCII"));
  CHECK(kind_of([&] { parse_las(no_a); }) == ErrorKind::MissingSection);
}
