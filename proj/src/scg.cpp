#include "seisreg/scg.hpp"

#include <cmath>
#include <sstream>

namespace seisreg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void ScgParams::validate() const {
  if (!(sigma > 0.0 && sigma <= 1e-4)) {
    throw Error(ErrorKind::InvalidParameter, "sigma must satisfy 0 < sigma <= 1e-4");
  }
  if (!(lambda1 > 0.0 && lambda1 <= 1e-4)) {
    throw Error(ErrorKind::InvalidParameter, "lambda1 must satisfy 0 < lambda1 <= 1e-4");
  }
  if (max_iters < 0) throw Error(ErrorKind::InvalidParameter, "max_iters must be >= 0");
}

ScgResult scg_minimize(const Objective& objective, std::vector<double> w0,
                       const ScgParams& params) {
  params.validate();
  const std::size_t n = w0.size();
  ScgResult res;
  res.weights = std::move(w0);
  auto& w = res.weights;
  auto& hist = res.history.iterations;

  double E = objective.value(w);
  res.final_loss = E;
  if (params.max_iters == 0) return res;

  std::vector<double> r = objective.gradient(w);
  for (double& v : r) v = -v;
  std::vector<double> p = r;
  std::vector<double> s(n), w_trial(n);
  double lambda = params.lambda1;
  double lambda_bar = 0.0;
  double delta = 0.0;
  bool success = true;

  auto guard = [&](double v, const char* name, int k) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << name << " became non-finite at iteration " << k;
      throw ScgDiverged(msg.str(), res.history);
    }
  };
  guard(E, "loss", 0);

  if (std::sqrt(dot(r, r)) < params.gradient_tol) {
    res.reason = ScgTermination::gradient_vanished;
    return res;
  }
  if (E <= params.target_loss) {
    res.reason = ScgTermination::target_loss;
    return res;
  }

  for (int k = 1; k <= params.max_iters; ++k) {
    ScgIteration it;
    it.k = k;
    const double p2 = dot(p, p);
    const double p_norm = std::sqrt(p2);

    // second-order information
    if (success) {
      const double sigma_k = params.sigma / p_norm;
      for (std::size_t i = 0; i < n; ++i) w_trial[i] = w[i] + sigma_k * p[i];
      const auto g_trial = objective.gradient(w_trial);
      for (std::size_t i = 0; i < n; ++i) s[i] = (g_trial[i] + r[i]) / sigma_k;  // r = -E'(w)
      delta = dot(p, s);
    }
    // scale
    delta += (lambda - lambda_bar) * p2;
    // make the Hessian estimate positive definite
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / p2);
      delta = -delta + lambda * p2;
      lambda = lambda_bar;
    }
    guard(delta, "delta", k);

    // step size
    const double mu = dot(p, r);
    const double alpha = mu / delta;
    for (std::size_t i = 0; i < n; ++i) w_trial[i] = w[i] + alpha * p[i];
    const double E_trial = objective.value(w_trial);
    guard(E_trial, "trial loss", k);

    // comparison parameter
    const double comparison = 2.0 * delta * (E - E_trial) / (mu * mu);
    guard(comparison, "comparison parameter", k);

    it.delta = delta;
    it.mu = mu;
    it.alpha = alpha;
    it.comparison = comparison;

    if (comparison >= 0.0) {
      w = w_trial;
      E = E_trial;
      const std::vector<double> r_prev = r;
      r = objective.gradient(w);
      for (double& v : r) v = -v;
      lambda_bar = 0.0;
      success = true;
      if (static_cast<std::size_t>(k) % n == 0) {
        p = r;
        it.restarted = true;
      } else {
        const double beta = (dot(r, r) - dot(r, r_prev)) / mu;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
      }
      if (comparison >= 0.75) lambda *= 0.25;
      it.accepted = true;
    } else {
      lambda_bar = lambda;
      success = false;
    }
    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p2;
    guard(lambda, "lambda", k);

    it.loss = E;
    it.lambda = lambda;
    it.lambda_bar = lambda_bar;
    hist.push_back(it);
    res.final_loss = E;

    if (std::sqrt(dot(r, r)) < params.gradient_tol) {
      res.reason = ScgTermination::gradient_vanished;
      return res;
    }
    if (it.accepted && E <= params.target_loss) {
      res.reason = ScgTermination::target_loss;
      return res;
    }
    // a non-descent direction after the conjugate update restarts along r
    if (success && dot(p, r) <= 0.0) {
      p = r;
      hist.back().restarted = true;
    }
  }
  res.reason = ScgTermination::max_iters;
  return res;
}

TrainResult scg_train(const MlpModel& model, const PatternView& patterns, const ScgParams& params,
                      Exec exec) {
  const std::size_t n_in = model.n_in, n_hidden = model.n_hidden;
  Objective obj{
      [&](std::span<const double> w) { return loss_at(w, n_in, n_hidden, patterns, exec); },
      [&](std::span<const double> w) { return gradient_at(w, n_in, n_hidden, patterns, exec); },
  };
  ScgResult r = scg_minimize(obj, model.weights, params);
  TrainResult out;
  out.model = model;
  out.model.weights = std::move(r.weights);
  out.history = std::move(r.history);
  out.reason = r.reason;
  out.final_loss = r.final_loss;
  return out;
}

}  // namespace seisreg
