// Copyright 2026 The certremove Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "certremove/trainer.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "certremove/error.h"
#include "certremove/kernels.h"
#include "certremove/perturbation.h"

namespace certremove {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

void CheckTrainingInputs(const Dataset& data, const ConvexLoss& loss,
                         double lambda, double grad_tol) {
  if (!data.normalized) {
    throw Error(ErrorCode::kParameter,
                "training requires a normalized dataset (max row norm <= 1)");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kParameter, "lambda must be finite and > 0");
  }
  if (!(grad_tol > 0.0)) {
    throw Error(ErrorCode::kParameter, "grad_tol must be > 0");
  }
  CheckTargets(data, loss);
}

// Tracks the iterate with the smallest gradient norm seen so far.
struct BestIterate {
  Eigen::VectorXd w;
  double grad_norm = std::numeric_limits<double>::infinity();

  void Offer(const Eigen::VectorXd& candidate, double norm) {
    if (norm < grad_norm) {
      w = candidate;
      grad_norm = norm;
    }
  }
};

}  // namespace

Objective ObjectiveAndGradient(const Eigen::VectorXd& w, const Dataset& data,
                               RowSpan rows, const ConvexLoss& loss,
                               double lambda, const Eigen::VectorXd& b) {
  CheckDimension(data, w.size(), "weight vector");
  CheckDimension(data, b.size(), "perturbation vector");
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kParameter, "lambda must be > 0");
  }
  const double reg = lambda * static_cast<double>(rows.size());
  kernels::LossSums sums = kernels::LossValueAndGradient(data, rows, w, loss.kind);
  Objective out;
  out.value = sums.value + 0.5 * reg * w.squaredNorm() + b.dot(w);
  out.gradient = std::move(sums.gradient);
  out.gradient += reg * w + b;
  return out;
}

Objective ObjectiveAndGradient(const Eigen::VectorXd& w, const Dataset& data,
                               const ConvexLoss& loss, double lambda,
                               const Eigen::VectorXd& b) {
  const std::vector<RowIndex> rows = AllRows(data);
  return ObjectiveAndGradient(w, data, rows, loss, lambda, b);
}

double DefaultGradTol(Eigen::Index n) {
  return 1e-10 * std::max<double>(1.0, static_cast<double>(n));
}

Eigen::VectorXd MinimizePerturbedObjective(const Dataset& data, RowSpan rows,
                                           const ConvexLoss& loss, double lambda,
                                           const Eigen::VectorXd& b,
                                           double grad_tol,
                                           const SolverOptions& options,
                                           SolverStats* stats) {
  if (rows.empty()) {
    throw Error(ErrorCode::kParameter, "cannot train on an empty row set");
  }
  const Eigen::Index d = data.dim();
  const double reg = lambda * static_cast<double>(rows.size());
  auto evaluate = [&](const Eigen::VectorXd& w) {
    return ObjectiveAndGradient(w, data, rows, loss, lambda, b);
  };

  SolverStats local;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Objective cur = evaluate(w);
  double gnorm = cur.gradient.norm();
  BestIterate best;
  best.Offer(w, gnorm);

  // L-BFGS phase.
  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(static_cast<size_t>(options.lbfgs_memory));
  while (gnorm > grad_tol && local.lbfgs_iterations < options.max_lbfgs_iterations) {
    // Two-loop recursion for p = -H_k g.
    Eigen::VectorXd q = cur.gradient;
    const int hist = static_cast<int>(s_hist.size());
    for (int k = hist - 1; k >= 0; --k) {
      alpha[static_cast<size_t>(k)] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[static_cast<size_t>(k)] * y_hist[k];
    }
    if (hist > 0) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      // Scale the first step by a typical curvature of the logistic objective.
      q /= reg + 0.25 * static_cast<double>(rows.size());
    }
    for (int k = 0; k < hist; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[static_cast<size_t>(k)] - beta) * s_hist[k];
    }
    Eigen::VectorXd direction = -q;
    double slope = cur.gradient.dot(direction);
    if (!(slope < 0.0)) {
      direction = -cur.gradient;
      slope = -gnorm * gnorm;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd w_next;
    Objective next;
    for (int t = 0; t < kMaxBacktracks; ++t) {
      w_next = w + step * direction;
      next = evaluate(w_next);
      if (next.value <= cur.value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // objective differences lost in rounding

    // Past this point the decrease is below the rounding of the objective and
    // L-BFGS only wanders; the Newton polish finishes the job.
    const bool stalled = cur.value - next.value <=
                         4.0 * std::numeric_limits<double>::epsilon() * std::abs(cur.value);
    Eigen::VectorXd s = w_next - w;
    Eigen::VectorXd y = next.gradient - cur.gradient;
    const double sy = s.dot(y);
    w = std::move(w_next);
    cur = std::move(next);
    gnorm = cur.gradient.norm();
    best.Offer(w, gnorm);
    ++local.lbfgs_iterations;
    if (sy > 0.0) {
      if (static_cast<int>(s_hist.size()) == options.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    if (stalled) break;
  }

  // Newton polish from the best iterate.
  w = best.w;
  cur = evaluate(w);
  gnorm = cur.gradient.norm();
  while (gnorm > grad_tol && local.newton_iterations < options.max_newton_iterations) {
    const Eigen::VectorXd curvature =
        kernels::SecondDerivatives(data, rows, w, loss.kind);
    Eigen::MatrixXd hessian = kernels::WeightedGramian(data.features, rows, curvature);
    hessian.diagonal().array() += reg;
    Eigen::LLT<Eigen::MatrixXd> llt(hessian);
    if (llt.info() != Eigen::Success) break;
    const Eigen::VectorXd direction = -llt.solve(cur.gradient);
    const double slope = cur.gradient.dot(direction);
    double step = 1.0;
    bool accepted = false;
    for (int t = 0; t < kMaxBacktracks; ++t) {
      Eigen::VectorXd w_next = w + step * direction;
      Objective next = evaluate(w_next);
      const double next_norm = next.gradient.norm();
      if (next.value <= cur.value + kArmijo * step * slope || next_norm < gnorm) {
        w = std::move(w_next);
        cur = std::move(next);
        gnorm = next_norm;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++local.newton_iterations;
    best.Offer(w, gnorm);
    if (!accepted) break;
  }

  local.grad_norm = best.grad_norm;
  if (stats != nullptr) *stats = local;
  if (best.grad_norm > grad_tol) {
    throw ConvergenceError("optimizer stopped at gradient norm " +
                               std::to_string(best.grad_norm) +
                               " above tolerance " + std::to_string(grad_tol),
                           best.w, best.grad_norm);
  }
  return best.w;
}

PerturbedModel TrainWithPerturbation(const Dataset& data, RowSpan rows,
                                     const ConvexLoss& loss, double lambda,
                                     const Eigen::VectorXd& b, double grad_tol,
                                     const SolverOptions& options) {
  CheckTrainingInputs(data, loss, lambda, grad_tol);
  CheckDimension(data, b.size(), "perturbation vector");
  SolverStats stats;
  PerturbedModel model;
  model.weights =
      MinimizePerturbedObjective(data, rows, loss, lambda, b, grad_tol, options, &stats);
  model.perturbation = b;
  model.loss_kind = loss.kind;
  model.lambda = lambda;
  model.grad_tol = grad_tol;
  model.attained_grad_norm = stats.grad_norm;
  return model;
}

PerturbedModel Train(const Dataset& data, const ConvexLoss& loss, double lambda,
                     double sigma, double epsilon, double delta,
                     std::uint64_t seed, double grad_tol,
                     const SolverOptions& options) {
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::kParameter, "epsilon and delta must be > 0");
  }
  const Eigen::VectorXd b = SamplePerturbationGaussian(data.dim(), sigma, seed);
  const std::vector<RowIndex> rows = AllRows(data);
  PerturbedModel model =
      TrainWithPerturbation(data, rows, loss, lambda, b, grad_tol, options);
  model.noise = NoiseScheme::kGaussian;
  model.sigma = sigma;
  model.epsilon = epsilon;
  model.delta = delta;
  model.seed = seed;
  return model;
}

}  // namespace certremove
