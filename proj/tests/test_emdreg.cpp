#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seisreg/emdreg.hpp"
#include "seisreg/metrics.hpp"
#include "support.hpp"

using namespace seisreg;
using testkit::kind_of;

namespace {

TimeSeries wave(std::size_t n, double cycles, double amp = 1.0, double offset = 0.0) {
  TimeSeries ts{0.0, 1.0, {}};
  for (std::size_t i = 0; i < n; ++i) {
    ts.values.push_back(offset + amp * std::sin(2.0 * std::numbers::pi * cycles * static_cast<double>(i) / static_cast<double>(n)));
  }
  return ts;
}

TimeSeries add(const TimeSeries& a, const TimeSeries& b) {
  TimeSeries out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] += b.values[i];
  return out;
}

std::vector<double> middle(const std::vector<double>& v, double keep = 0.5) {
  const auto cut = static_cast<std::size_t>(v.size() * (1.0 - keep) / 2.0);
  return {v.begin() + static_cast<std::ptrdiff_t>(cut), v.end() - static_cast<std::ptrdiff_t>(cut)};
}

double zero_crossing_rate(const TimeSeries& x) {
  return static_cast<double>(count_zero_crossings(x.values)) / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("find_extrema basics") {
  const auto a = find_extrema(std::vector<double>{0, 1, 0});
  CHECK(a.maxima == std::vector<std::size_t>{1});
  CHECK(a.minima.empty());
  const auto b = find_extrema(std::vector<double>{0, 1, 2, 3, 4});
  CHECK(b.maxima.empty());
  CHECK(b.minima.empty());
  const auto c = find_extrema(std::vector<double>{0, 1, 1, 0});
  CHECK(c.maxima == std::vector<std::size_t>{1});
  const auto d = find_extrema(std::vector<double>{3, 1, 1, 1, 3});
  CHECK(d.minima == std::vector<std::size_t>{2});
  // a plateau that keeps rising is not an extremum
  CHECK(find_extrema(std::vector<double>{0, 1, 1, 2}).maxima.empty());
}

TEST_CASE("zero crossings skip exact zeros") {
  CHECK(count_zero_crossings(std::vector<double>{1, -1, 1}) == 2);
  CHECK(count_zero_crossings(std::vector<double>{1, 0, -1}) == 1);
  CHECK(count_zero_crossings(std::vector<double>{1, 0, 1}) == 0);
}

TEST_CASE("envelope mean of a sinusoid is close to its offset") {
  const auto s = wave(800, 6);
  for (double m : middle(envelope_mean(s).values)) CHECK(std::abs(m) < 0.02);
  const auto o = wave(800, 6, 1.0, 3.0);
  for (double m : middle(envelope_mean(o).values)) CHECK(std::abs(m - 3.0) < 0.02);
  CHECK(kind_of([] { envelope_mean(std::vector<double>{0, 1, 0, 1, 0.5}); }) ==
        ErrorKind::TooFewExtrema);
}

TEST_CASE("natural spline interpolates its knots and straight lines") {
  const std::vector<double> xs = {0, 3, 7, 10}, ys = {1, 7, 15, 21};
  const auto v = natural_spline_on_grid(xs, ys, 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(v[i] == doctest::Approx(1.0 + 2.0 * static_cast<double>(i)));
}

TEST_CASE("monotone input has no IMFs") {
  TimeSeries ramp{0.0, 1.0, {}};
  for (int i = 0; i < 100; ++i) ramp.values.push_back(0.1 * i * i);
  const auto set = emd(ramp);
  CHECK(set.imfs.empty());
  CHECK(set.residue.values == ramp.values);
  CHECK(kind_of([&] { regularize_emd(ramp, {}, 1); }) == ErrorKind::P1OutOfRange);
}

TEST_CASE("single tone yields one dominant IMF") {
  const auto s = wave(1024, 8);
  const auto set = emd(s);
  REQUIRE_FALSE(set.imfs.empty());
  CHECK(pearson(set.imfs[0].values, s.values) > 0.99);
  double r = 0.0, in = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    r += set.residue.values[i] * set.residue.values[i];
    in += s.values[i] * s.values[i];
  }
  CHECK(std::sqrt(r / in) < 0.05);
}

TEST_CASE("two-tone separation and p1 = 1 suppression") {
  const auto slow = wave(2048, 6), fast = wave(2048, 48, 0.8);
  const auto x = add(slow, fast);
  const auto set = emd(x);
  REQUIRE(set.imfs.size() >= 2);
  CHECK(pearson(middle(set.imfs[0].values), middle(fast.values)) > 0.95);
  const auto r = regularize_emd(x, {}, 1);
  CHECK(pearson(middle(r.series.values), middle(slow.values)) > 0.95);
  CHECK(r.report.entropy_after < r.report.entropy_before);
  CHECK(kind_of([&] { regularize_emd(x, {}, 0); }) == ErrorKind::P1OutOfRange);
  CHECK(kind_of([&] { regularize_emd(x, {}, static_cast<int>(set.imfs.size())); }) ==
        ErrorKind::P1OutOfRange);
}

TEST_CASE("IMF invariants on the fixtures") {
  std::vector<TimeSeries> fixtures;
  fixtures.push_back(wave(1024, 8));
  fixtures.push_back(add(wave(2048, 6), wave(2048, 48, 0.8)));
  TimeSeries noisy{0.0, 1.0, testkit::random_signal(1500, 21)};
  fixtures.push_back(noisy);
  TimeSeries chirp{0.0, 1.0, {}};
  for (int i = 0; i < 1200; ++i) chirp.values.push_back(std::sin(0.00002 * i * i) + 0.001 * i);
  fixtures.push_back(chirp);

  for (const auto& f : fixtures) {
    const auto set = emd(f);
    std::vector<double> sum = set.residue.values;
    for (const auto& imf : set.imfs) {
      const auto e = find_extrema(imf.values);
      const auto n_ext = static_cast<long>(e.maxima.size() + e.minima.size());
      CHECK(std::abs(n_ext - static_cast<long>(count_zero_crossings(imf.values))) <= 1);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += imf.values[i];
    }
    CHECK(testkit::rms_diff(sum, f.values) < 1e-8);
    for (std::size_t i = 1; i < set.imfs.size(); ++i) {
      CHECK(zero_crossing_rate(set.imfs[i]) < zero_crossing_rate(set.imfs[i - 1]));
    }
  }
}

TEST_CASE("broadband signals decompose into more IMFs than smooth ones") {
  TimeSeries smooth{0.0, 1.0, {}};
  for (int i = 0; i < 2000; ++i) smooth.values.push_back(std::sin(i * 0.01) + 0.5 * std::sin(i * 0.037));
  const TimeSeries broad{0.0, 1.0, testkit::random_signal(2000, 8)};
  CHECK(emd(smooth).imfs.size() < emd(broad).imfs.size());
}

TEST_CASE("sift parameter validation") {
  CHECK(kind_of([] { SiftParams{0.0}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { SiftParams{0.2, 0}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { emd(TimeSeries{0.0, 1.0, std::vector<double>(10, 1.0)}); }) == ErrorKind::TooShort);
}
