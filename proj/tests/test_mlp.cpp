#include <doctest.h>

#include <cmath>

#include "seisreg/mlp.hpp"
#include "support.hpp"

using namespace seisreg;
using testkit::kind_of;

namespace {

struct Patterns {
  std::vector<double> x, d;
  std::size_t n_in;
  PatternView view() const { return {x, d, n_in}; }
};

Patterns random_patterns(std::size_t n, std::size_t n_in, std::uint64_t seed) {
  return {testkit::random_signal(n * n_in, seed, -2, 2), testkit::random_signal(n, seed + 1, 0.1, 0.9), n_in};
}

// written out from the layout comment, without sharing code with the library
double naive_forward(const std::vector<double>& w, std::size_t n_in, std::size_t n_hidden,
                     std::span<const double> x) {
  double out = 0.0;
  const std::size_t stride = n_in + 1;
  for (std::size_t j = 0; j < n_hidden; ++j) {
    double a = w[j * stride + n_in];
    for (std::size_t i = 0; i < n_in; ++i) a += w[j * stride + i] * x[i];
    out += w[stride * n_hidden + j] * std::tanh(a);
  }
  out += w[stride * n_hidden + n_hidden];
  return 1.0 / (1.0 + std::exp(-out));
}

}  // namespace

TEST_CASE("init_model draws weights inside the fan-in bound") {
  const auto m = init_model(3, 10, 42);
  CHECK(m.weights.size() == MlpModel::weight_count(3, 10));
  CHECK(m.weights.size() == 51);
  for (std::size_t j = 0; j < 10; ++j) {
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(m.weights[j * 4 + k]) <= 1.0 / std::sqrt(3.0));
  }
  for (std::size_t k = m.output_offset(); k < m.weights.size(); ++k) {
    CHECK(std::abs(m.weights[k]) <= 1.0 / std::sqrt(10.0));
  }
  CHECK(init_model(3, 10, 42).weights == m.weights);
  CHECK(init_model(3, 10, 43).weights != m.weights);
  CHECK(kind_of([] { init_model(0, 4, 1); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("forward matches a naive evaluation") {
  const auto m = init_model(4, 7, 3);
  const auto x = testkit::random_signal(40, 9, -2, 2);
  for (std::size_t r = 0; r < 10; ++r) {
    const std::span<const double> row(x.data() + r * 4, 4);
    CHECK(forward(m, row) == doctest::Approx(naive_forward(m.weights, 4, 7, row)).epsilon(1e-14));
  }
  CHECK(logistic(0.0) == 0.5);
  CHECK(kind_of([&] { forward(m, std::span<const double>(x.data(), 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("analytic gradient agrees with central differences") {
  const auto p = random_patterns(50, 3, 11);
  const auto m = init_model(3, 5, 2);
  const auto g = gradient(m, p.view(), Exec::serial);
  REQUIRE(g.size() == m.weights.size());
  const double h = 1e-6;
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    auto wp = m.weights, wm = m.weights;
    wp[k] += h;
    wm[k] -= h;
    const double fd = (loss_at(wp, 3, 5, p.view(), Exec::serial) - loss_at(wm, 3, 5, p.view(), Exec::serial)) / (2 * h);
    CHECK(std::abs(g[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("loss is half the mean squared error") {
  const auto p = random_patterns(20, 2, 5);
  const auto m = init_model(2, 3, 8);
  double s = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const double e = p.d[i] - naive_forward(m.weights, 2, 3, p.view().row(i));
    s += e * e;
  }
  CHECK(loss(m, p.view()) == doctest::Approx(s / 40.0).epsilon(1e-13));
}

TEST_CASE("serial and parallel loss and gradient agree bit for bit") {
  // more than one reduction block
  const auto p = random_patterns(3000, 3, 17);
  const auto m = init_model(3, 10, 4);
  CHECK(loss(m, p.view(), Exec::serial) == loss(m, p.view(), Exec::parallel));
  CHECK(gradient(m, p.view(), Exec::serial) == gradient(m, p.view(), Exec::parallel));
}

TEST_CASE("pattern shape errors") {
  const auto m = init_model(3, 4, 1);
  const Patterns wrong = random_patterns(10, 2, 1);
  CHECK(kind_of([&] { loss(m, wrong.view()); }) == ErrorKind::DimensionMismatch);
  const Patterns empty{{}, {}, 3};
  CHECK(kind_of([&] { loss(m, empty.view()); }) == ErrorKind::TooShort);
  const std::vector<double> short_w(5, 0.0);
  const auto p = random_patterns(10, 3, 2);
  CHECK(kind_of([&] { loss_at(short_w, 3, 4, p.view()); }) == ErrorKind::DimensionMismatch);
}
