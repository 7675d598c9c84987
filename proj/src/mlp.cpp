#include "seisreg/mlp.hpp"

#include <cmath>

#include "seisreg/error.hpp"
#include "seisreg/rng.hpp"

namespace seisreg {

namespace {

// Patterns are reduced in fixed-size blocks whose partial sums are combined in
// block order, so the parallel result does not depend on the thread count.
constexpr std::size_t kBlock = 256;

void check_shapes(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
                  const PatternView& p) {
  if (w.size() != MlpModel::weight_count(n_in, n_hidden)) {
    throw Error(ErrorKind::DimensionMismatch, "weight vector has wrong length");
  }
  if (p.size() == 0) throw Error(ErrorKind::TooShort, "empty pattern set");
  if (p.n_in != n_in || p.inputs.size() != p.size() * n_in) {
    throw Error(ErrorKind::DimensionMismatch, "pattern width does not match model inputs");
  }
}

// Squared error and (optionally) its gradient contribution for one pattern.
double accumulate_pattern(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
                          std::span<const double> x, double target, std::vector<double>& hidden,
                          double* grad) {
  const std::size_t out_off = (n_in + 1) * n_hidden;
  double v_out = w[out_off + n_hidden];
  for (std::size_t j = 0; j < n_hidden; ++j) {
    const double* wj = w.data() + j * (n_in + 1);
    double v = wj[n_in];
    for (std::size_t i = 0; i < n_in; ++i) v += wj[i] * x[i];
    hidden[j] = std::tanh(v);
    v_out += w[out_off + j] * hidden[j];
  }
  const double o = logistic(v_out);
  const double e = target - o;
  if (grad) {
    // d/dw of e^2/2 = -e * o(1-o) * dv/dw
    const double delta_out = -e * o * (1.0 - o);
    for (std::size_t j = 0; j < n_hidden; ++j) {
      grad[out_off + j] += delta_out * hidden[j];
      const double delta_h = delta_out * w[out_off + j] * (1.0 - hidden[j] * hidden[j]);
      double* gj = grad + j * (n_in + 1);
      for (std::size_t i = 0; i < n_in; ++i) gj[i] += delta_h * x[i];
      gj[n_in] += delta_h;
    }
    grad[out_off + n_hidden] += delta_out;
  }
  return e * e;
}

}  // namespace

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

MlpModel init_model(std::size_t n_in, std::size_t n_hidden, std::uint64_t seed) {
  if (n_in < 1 || n_hidden < 1) {
    throw Error(ErrorKind::InvalidParameter, "n_in and n_hidden must be >= 1");
  }
  MlpModel m;
  m.n_in = n_in;
  m.n_hidden = n_hidden;
  m.weights.resize(MlpModel::weight_count(n_in, n_hidden));
  Rng rng(seed);
  const double r_hidden = 1.0 / std::sqrt(static_cast<double>(n_in));
  const double r_out = 1.0 / std::sqrt(static_cast<double>(n_hidden));
  const std::size_t out_off = m.output_offset();
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    const double r = k < out_off ? r_hidden : r_out;
    m.weights[k] = rng.uniform(-r, r);
  }
  return m;
}

double forward(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
               std::span<const double> input) {
  if (input.size() != n_in) {
    throw Error(ErrorKind::DimensionMismatch, "input has " + std::to_string(input.size()) +
                                                  " values, model expects " + std::to_string(n_in));
  }
  if (w.size() != MlpModel::weight_count(n_in, n_hidden)) {
    throw Error(ErrorKind::DimensionMismatch, "weight vector has wrong length");
  }
  const std::size_t out_off = (n_in + 1) * n_hidden;
  double v_out = w[out_off + n_hidden];
  for (std::size_t j = 0; j < n_hidden; ++j) {
    const double* wj = w.data() + j * (n_in + 1);
    double v = wj[n_in];
    for (std::size_t i = 0; i < n_in; ++i) v += wj[i] * input[i];
    v_out += w[out_off + j] * std::tanh(v);
  }
  return logistic(v_out);
}

double forward(const MlpModel& model, std::span<const double> input) {
  return forward(model.weights, model.n_in, model.n_hidden, input);
}

double loss_at(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
               const PatternView& p, Exec exec) {
  check_shapes(w, n_in, n_hidden, p);
  const std::size_t n = p.size();
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(n_blocks, 0.0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n_blocks), [&](std::ptrdiff_t b) {
    std::vector<double> hidden(n_hidden);
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      acc += accumulate_pattern(w, n_in, n_hidden, p.row(i), p.targets[i], hidden, nullptr);
    }
    partial[static_cast<std::size_t>(b)] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / (2.0 * static_cast<double>(n));
}

std::vector<double> gradient_at(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
                                const PatternView& p, Exec exec) {
  check_shapes(w, n_in, n_hidden, p);
  const std::size_t n = p.size();
  const std::size_t nw = w.size();
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(n_blocks * nw, 0.0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n_blocks), [&](std::ptrdiff_t b) {
    std::vector<double> hidden(n_hidden);
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double* g = partial.data() + static_cast<std::size_t>(b) * nw;
    for (std::size_t i = lo; i < hi; ++i) {
      accumulate_pattern(w, n_in, n_hidden, p.row(i), p.targets[i], hidden, g);
    }
  });
  std::vector<double> grad(nw, 0.0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t k = 0; k < nw; ++k) grad[k] += partial[b * nw + k];
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (double& g : grad) g *= scale;
  return grad;
}

double loss(const MlpModel& model, const PatternView& patterns, Exec exec) {
  return loss_at(model.weights, model.n_in, model.n_hidden, patterns, exec);
}

std::vector<double> gradient(const MlpModel& model, const PatternView& patterns, Exec exec) {
  return gradient_at(model.weights, model.n_in, model.n_hidden, patterns, exec);
}

}  // namespace seisreg
