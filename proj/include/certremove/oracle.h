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

#ifndef CERTREMOVE_ORACLE_H_
#define CERTREMOVE_ORACLE_H_

#include <optional>

#include <Eigen/Dense>

#include "certremove/dataset.h"
#include "certremove/loss.h"
#include "certremove/trainer.h"

// Brute-force references for auditing removals. Nothing here calls into the
// removal engine or the production optimizer: the only shared code is the
// loss primitives and the serial reference kernels.
namespace certremove::oracle {

// Minimizer of L_b over `live_rows` to grad_tol by damped Newton iterations
// on the serial reference kernels, starting from zero.
Eigen::VectorXd RetrainExact(const Dataset& data, RowSpan live_rows,
                             const ConvexLoss& loss, double lambda,
                             const Eigen::VectorXd& b, double grad_tol);

// Least squares only: solves (2 X'X + lambda m I) w = 2 X'y - b directly.
Eigen::VectorXd ClosedFormRidge(const Dataset& data, RowSpan rows,
                                double lambda, const Eigen::VectorXd& b);

// ||sum_live l'(w'x_i, y_i) x_i + lambda n_live w||, the gradient residual of
// the unperturbed objective.
double TrueResidual(const Eigen::VectorXd& w, const Dataset& data,
                    RowSpan live_rows, const ConvexLoss& loss, double lambda);

// The same residual plus b: ||grad L_b(w)||. This is the quantity the
// data-dependent bound controls when the model was trained on L_b.
double TrueResidualPerturbed(const Eigen::VectorXd& w, const Dataset& data,
                             RowSpan live_rows, const ConvexLoss& loss,
                             double lambda, const Eigen::VectorXd& b);

struct AuditReport {
  // ||grad L_b(w-; D')||, with b the model's perturbation.
  double true_residual_norm = 0.0;
  // ||grad L(w-; D')|| without b. Equal to the above when b = 0.
  double unperturbed_residual_norm = 0.0;
  double claimed_bound = 0.0;
  std::optional<double> worst_case_bound;
  // ||w- - w_retrain||.
  double weight_gap = 0.0;
  // Comparison slack: 1e-9 + 10 * grad_tol of the audited model.
  double slack = 0.0;
  bool bound_holds = false;
};

// Retrains on `live_after` with the model's b and compares against
// `weights_after`, the Newton-updated weights.
AuditReport AuditRemoval(const PerturbedModel& before,
                         const Eigen::VectorXd& weights_after,
                         RowSpan live_after, const Dataset& data,
                         const ConvexLoss& loss, double claimed_bound,
                         std::optional<double> worst_case_bound);

}  // namespace certremove::oracle

#endif  // CERTREMOVE_ORACLE_H_
