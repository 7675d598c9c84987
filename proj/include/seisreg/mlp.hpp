#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seisreg/exec.hpp"

namespace seisreg {

/// n_in -> n_hidden (tanh) -> 1 (logistic). Biases are weights from a fixed +1
/// input. Flattened layout: for each hidden unit j, [w_j0 .. w_j(n_in-1), b_j];
/// then the output unit [v_0 .. v_(n_hidden-1), c].
struct MlpModel {
  std::size_t n_in = 0;
  std::size_t n_hidden = 0;
  std::vector<double> weights;

  static std::size_t weight_count(std::size_t n_in, std::size_t n_hidden) {
    return (n_in + 1) * n_hidden + n_hidden + 1;
  }
  std::size_t output_offset() const { return (n_in + 1) * n_hidden; }
};

/// Read-only view of row-major inputs (n x n_in) and their targets.
struct PatternView {
  std::span<const double> inputs;
  std::span<const double> targets;
  std::size_t n_in = 0;

  std::size_t size() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const { return inputs.subspan(i * n_in, n_in); }
};

/// Uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)], fan_in excluding the bias.
MlpModel init_model(std::size_t n_in, std::size_t n_hidden, std::uint64_t seed);

double logistic(double v);

double forward(const MlpModel& model, std::span<const double> input);
double forward(std::span<const double> weights, std::size_t n_in, std::size_t n_hidden,
               std::span<const double> input);

/// (1/2N) sum_n (d(n) - o(n))^2
double loss(const MlpModel& model, const PatternView& patterns, Exec exec = Exec::parallel);

/// Analytic gradient of loss() by backpropagation, same layout as the weights.
std::vector<double> gradient(const MlpModel& model, const PatternView& patterns,
                             Exec exec = Exec::parallel);

/// Loss and gradient evaluated for an arbitrary flattened weight vector.
double loss_at(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
               const PatternView& patterns, Exec exec = Exec::parallel);
std::vector<double> gradient_at(std::span<const double> w, std::size_t n_in, std::size_t n_hidden,
                                const PatternView& patterns, Exec exec = Exec::parallel);

}  // namespace seisreg
