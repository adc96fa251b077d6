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

#ifndef CERTREMOVE_TRAINER_H_
#define CERTREMOVE_TRAINER_H_

#include <cstdint>

#include <Eigen/Dense>

#include "certremove/dataset.h"
#include "certremove/loss.h"

namespace certremove {

enum class NoiseScheme { kGaussian, kSphericalGamma };

// Output of training: the minimizer of the perturbed objective
//
//   L_b(w; D) = sum_i l(w'x_i, y_i) + (lambda n / 2) ||w||^2 + b'w
//
// together with everything needed to reproduce b and audit the solution.
struct PerturbedModel {
  Eigen::VectorXd weights;
  Eigen::VectorXd perturbation;
  LossKind loss_kind = LossKind::kLogistic;
  NoiseScheme noise = NoiseScheme::kGaussian;
  double lambda = 0.0;
  double sigma = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  // Requested tolerance on ||grad L_b|| and the value actually attained.
  double grad_tol = 0.0;
  double attained_grad_norm = 0.0;
};

struct Objective {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// L_b and its gradient over all rows of `data`.
Objective ObjectiveAndGradient(const Eigen::VectorXd& w, const Dataset& data,
                               const ConvexLoss& loss, double lambda,
                               const Eigen::VectorXd& b);

// Same over a row subset; the regularizer is scaled by the subset size.
Objective ObjectiveAndGradient(const Eigen::VectorXd& w, const Dataset& data,
                               RowSpan rows, const ConvexLoss& loss,
                               double lambda, const Eigen::VectorXd& b);

// 1e-10 * max(1, n).
double DefaultGradTol(Eigen::Index n);

struct SolverOptions {
  int lbfgs_memory = 10;
  int max_lbfgs_iterations = 3000;
  int max_newton_iterations = 50;
};

struct SolverStats {
  int lbfgs_iterations = 0;
  int newton_iterations = 0;
  double grad_norm = 0.0;
};

// Minimizes L_b over the given rows starting from w = 0: L-BFGS with an
// Armijo backtracking line search, followed by damped Newton steps if the
// line search stalls or the iteration cap is hit before grad_tol is reached.
// Throws ConvergenceError carrying the best iterate on failure.
Eigen::VectorXd MinimizePerturbedObjective(const Dataset& data, RowSpan rows,
                                           const ConvexLoss& loss, double lambda,
                                           const Eigen::VectorXd& b,
                                           double grad_tol,
                                           const SolverOptions& options = {},
                                           SolverStats* stats = nullptr);

// Samples b ~ N(0, sigma^2 I) from `seed` and minimizes L_b over all rows.
// Requires a normalized dataset, lambda > 0, grad_tol > 0.
PerturbedModel Train(const Dataset& data, const ConvexLoss& loss, double lambda,
                     double sigma, double epsilon, double delta,
                     std::uint64_t seed, double grad_tol,
                     const SolverOptions& options = {});

// Trains on `rows` only with an explicitly supplied perturbation vector.
PerturbedModel TrainWithPerturbation(const Dataset& data, RowSpan rows,
                                     const ConvexLoss& loss, double lambda,
                                     const Eigen::VectorXd& b, double grad_tol,
                                     const SolverOptions& options = {});

}  // namespace certremove

#endif  // CERTREMOVE_TRAINER_H_
