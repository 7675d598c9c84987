#include <doctest.h>

#include <cmath>
#include <limits>

#include "seisreg/scg.hpp"
#include "support.hpp"

using namespace seisreg;
using testkit::kind_of;

namespace {

// f(w) = 1/2 w'Aw - b'w with A symmetric positive definite
struct Quadratic {
  std::vector<double> a;  // row-major n x n
  std::vector<double> b;
  std::size_t n;

  Objective objective() const {
    return {[this](std::span<const double> w) {
              double f = 0.0;
              for (std::size_t i = 0; i < n; ++i) {
                double aw = 0.0;
                for (std::size_t j = 0; j < n; ++j) aw += a[i * n + j] * w[j];
                f += 0.5 * w[i] * aw - b[i] * w[i];
              }
              return f;
            },
            [this](std::span<const double> w) {
              std::vector<double> g(n);
              for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) g[i] += a[i * n + j] * w[j];
                g[i] -= b[i];
              }
              return g;
            }};
  }
};

Quadratic make_quadratic(std::size_t n) {
  // A = M'M + I
  const auto m = testkit::random_signal(n * n, 31);
  Quadratic q{std::vector<double>(n * n), testkit::random_signal(n, 32), n};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m[k * n + i] * m[k * n + j];
      q.a[i * n + j] = s;
    }
  }
  return q;
}

}  // namespace

TEST_CASE("scg minimizes a quadratic") {
  const auto q = make_quadratic(6);
  // the quadratic goes negative, so the default target loss of 0 would stop at once
  const auto r = scg_minimize(q.objective(), std::vector<double>(6, 0.0), {.max_iters = 60, .target_loss = -1e300});
  const auto g = q.objective().gradient(r.weights);
  double gn = 0.0;
  for (double v : g) gn += v * v;
  CHECK(std::sqrt(gn) < 1e-6);
  for (const auto& it : r.history.iterations) CHECK(it.delta > 0.0);
}

TEST_CASE("zero iterations return the start point") {
  const auto q = make_quadratic(3);
  const std::vector<double> w0 = {0.3, -0.2, 0.1};
  const auto r = scg_minimize(q.objective(), w0, {.max_iters = 0});
  CHECK(r.weights == w0);
  CHECK(r.history.iterations.empty());
  CHECK(r.final_loss == q.objective().value(w0));
  CHECK(r.reason == ScgTermination::max_iters);
}

TEST_CASE("accepted steps never raise the loss") {
  const auto x = testkit::random_signal(400, 3, -2, 2);
  std::vector<double> d;
  for (std::size_t i = 0; i < 200; ++i) d.push_back(logistic(0.5 * x[2 * i]));
  const PatternView view{x, d, 2};
  const auto model = init_model(2, 4, 9);
  const auto r = scg_train(model, view, {.max_iters = 500}, Exec::serial);

  double prev = loss(model, view, Exec::serial);
  for (const auto& it : r.history.iterations) {
    CHECK(it.delta > 0.0);
    CHECK(it.loss <= prev);
    if (!it.accepted) CHECK(it.loss == prev);
    prev = it.loss;
  }
  double se = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const double e = forward(r.model, view.row(i)) - d[i];
    se += e * e;
  }
  CHECK(std::sqrt(se / 200.0) < 0.01);
}

TEST_CASE("target loss stops the iteration early") {
  const auto q = make_quadratic(4);
  const auto r = scg_minimize(q.objective(), std::vector<double>(4, 0.0), {.max_iters = 100, .target_loss = -0.01});
  CHECK(r.reason == ScgTermination::target_loss);
  CHECK(r.final_loss <= -0.01);
}

TEST_CASE("parameter bounds") {
  CHECK(kind_of([] { ScgParams{.sigma = 0.0}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { ScgParams{.sigma = 2e-4}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { ScgParams{.lambda1 = -1.0}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { ScgParams{.lambda1 = 1e-3}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { ScgParams{.max_iters = -1}.validate(); }) == ErrorKind::InvalidParameter);
  CHECK_NOTHROW(ScgParams{.sigma = 1e-4, .lambda1 = 1e-4}.validate());
}

TEST_CASE("a non-finite trial loss raises ScgDiverged") {
  const std::vector<double> w0 = {1.0, 2.0};
  Objective obj{[&](std::span<const double> w) {
                  return w[0] == w0[0] && w[1] == w0[1] ? 1.0 : std::numeric_limits<double>::quiet_NaN();
                },
                [](std::span<const double>) { return std::vector<double>{1.0, 1.0}; }};
  bool caught = false;
  try {
    scg_minimize(obj, w0, {});
  } catch (const ScgDiverged& e) {
    caught = true;
    CHECK(e.kind() == ErrorKind::DivergedNonFinite);
    CHECK(e.history().iterations.empty());
  }
  CHECK(caught);
}

TEST_CASE("training is identical under serial and parallel execution") {
  const auto x = testkit::random_signal(1200, 13, -1, 1);
  const auto d = testkit::random_signal(600, 14, 0.1, 0.9);
  const PatternView view{x, d, 2};
  const auto model = init_model(2, 6, 5);
  const auto a = scg_train(model, view, {.max_iters = 40}, Exec::serial);
  const auto b = scg_train(model, view, {.max_iters = 40}, Exec::parallel);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.final_loss == b.final_loss);
}
