#pragma once

#include <functional>
#include <span>
#include <vector>

#include "seisreg/error.hpp"
#include "seisreg/mlp.hpp"

namespace seisreg {

struct ScgParams {
  double sigma = 1e-4;    // 0 < sigma <= 1e-4
  double lambda1 = 1e-4;  // 0 < lambda1 <= 1e-4
  int max_iters = 2000;
  double target_loss = 0.0;
  double gradient_tol = 1e-10;  // |r| below this counts as r = 0

  void validate() const;
};

/// One pass through the SCG loop.
struct ScgIteration {
  int k = 0;
  double loss = 0.0;        // objective at the current (possibly unchanged) weights
  double lambda = 0.0;      // after the scale updates of this iteration
  double lambda_bar = 0.0;
  double delta = 0.0;       // curvature after the positive-definiteness repair
  double mu = 0.0;
  double alpha = 0.0;
  double comparison = 0.0;  // Delta_k
  bool accepted = false;
  bool restarted = false;   // p_{k+1} = r_{k+1}
};

struct TrainHistory {
  std::vector<ScgIteration> iterations;
};

enum class ScgTermination { gradient_vanished, target_loss, max_iters };

struct ScgResult {
  std::vector<double> weights;
  double final_loss = 0.0;
  TrainHistory history;
  ScgTermination reason = ScgTermination::max_iters;
};

/// Thrown when a scalar of the iteration turns non-finite; carries the history so far.
class ScgDiverged : public Error {
public:
  ScgDiverged(const std::string& what, TrainHistory history)
      : Error(ErrorKind::DivergedNonFinite, what), history_(std::move(history)) {}
  const TrainHistory& history() const { return history_; }

private:
  TrainHistory history_;
};

struct Objective {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

/// Moller's scaled conjugate gradient. No line search: the step comes from a
/// finite-difference curvature estimate regularized by lambda.
ScgResult scg_minimize(const Objective& objective, std::vector<double> w0, const ScgParams& params);

struct TrainResult {
  MlpModel model;
  TrainHistory history;
  ScgTermination reason = ScgTermination::max_iters;
  double final_loss = 0.0;
};

/// Full-batch SCG on loss()/gradient().
TrainResult scg_train(const MlpModel& model, const PatternView& patterns, const ScgParams& params,
                      Exec exec = Exec::parallel);

}  // namespace seisreg
