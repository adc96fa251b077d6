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

#ifndef CERTREMOVE_REMOVAL_H_
#define CERTREMOVE_REMOVAL_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "certremove/budget.h"
#include "certremove/dataset.h"
#include "certremove/loss.h"
#include "certremove/trainer.h"

namespace certremove {

// Bookkeeping for repeated removals from one trained model.
//
// Invariants: gram == sum over live rows of x_i x_i' (up to rounding),
// live_count == number of set flags in live_mask.
struct RemovalState {
  Eigen::MatrixXd gram;
  std::vector<std::uint8_t> live_mask;
  Eigen::Index live_count = 0;
  // Applied batches in order, as dataset row indices.
  std::vector<std::vector<RowIndex>> history;

  // Every row live; gram accumulated over the whole dataset.
  static RemovalState ForDataset(const Dataset& data);
  // Rows flagged in `live_mask` live; gram accumulated over those rows.
  static RemovalState ForLiveMask(const Dataset& data,
                                  std::vector<std::uint8_t> live_mask);

  bool IsLive(RowIndex i) const;
  std::vector<RowIndex> LiveRows() const;
};

enum class RemovalStatus { kApplied, kRetrainRequired };

struct RemovalOutcome {
  RemovalStatus status = RemovalStatus::kRetrainRequired;
  // Present only when applied.
  std::optional<Eigen::VectorXd> new_weights;
  // Data-dependent bound on the gradient residual of this batch.
  double residual_bound_increment = 0.0;
  // Worst-case bound for the same batch; unset when the loss has no finite C.
  std::optional<double> worst_case_increment;
  // ||H^-1 Delta||, the influence of the batch on the weights.
  double update_norm = 0.0;
};

// Throws Error(kStaleIndex) if `batch` is empty, has duplicates, or names a
// row that is out of range or no longer live. Throws Error(kParameter) if the
// batch would remove every remaining row.
void ValidateBatch(const RemovalState& state, RowSpan batch);

// Delta = m * lambda * w + sum_{i in batch} l'(w'x_i, y_i) x_i, m = |batch|.
Eigen::VectorXd ComputeDelta(const Eigen::VectorXd& w, RowSpan batch,
                             const Dataset& data, const ConvexLoss& loss,
                             double lambda);

// H = sum_{i in live_rows} l''(w'x_i, y_i) x_i x_i' + lambda * |live_rows| * I.
Eigen::MatrixXd ComputeHessian(const Eigen::VectorXd& w, RowSpan live_rows,
                               const Dataset& data, const ConvexLoss& loss,
                               double lambda);

// s = H^-1 Delta by Cholesky factorization with one step of iterative
// refinement. Throws Error(kNumeric) if H is not positive definite or the
// solve residual exceeds 1e-10 * ||Delta||.
Eigen::VectorXd SolveNewtonSystem(const Eigen::MatrixXd& hessian,
                                  const Eigen::VectorXd& delta);

// w + H^-1 Delta.
Eigen::VectorXd NewtonUpdate(const Eigen::VectorXd& w,
                             const Eigen::MatrixXd& hessian,
                             const Eigen::VectorXd& delta);

// ||X||_2 = sqrt(lambda_max(K)) for K = X'X, from a full symmetric
// eigendecomposition, inflated by a relative 1e-10 so it stays an upper bound.
double SpectralNormOfRows(const Eigen::MatrixXd& gram);

// gamma * ||X||_2 * ||s|| * ||X s|| over the live rows.
double ResidualBoundDataDependent(double gamma, const Eigen::MatrixXd& gram,
                                  const Eigen::VectorXd& step,
                                  const Dataset& data, RowSpan live_rows);

// 4 gamma m^2 C^2 / (lambda^2 (n - m)). Throws Error(kParameter) unless
// n_before > m >= 1, and Error(kUnsupported) if C is unset.
double ResidualBoundWorstCase(double gamma, std::optional<double> grad_bound,
                              double lambda, Eigen::Index n_before,
                              Eigen::Index m);

// A fully evaluated candidate removal. Building one mutates nothing.
struct RemovalPlan {
  std::vector<RowIndex> batch;
  std::vector<RowIndex> live_after;
  Eigen::VectorXd delta;
  Eigen::VectorXd step;  // H^-1 Delta
  Eigen::VectorXd new_weights;
  Eigen::MatrixXd gram_after;
  double spectral_norm = 0.0;
  double projected_step_norm = 0.0;
  double increment = 0.0;
  std::optional<double> worst_case;
};

RemovalPlan PlanRemoval(const PerturbedModel& model, const RemovalState& state,
                        RowSpan batch, const Dataset& data,
                        const ConvexLoss& loss);

// Applies a plan produced from exactly this (model, state).
void CommitRemoval(PerturbedModel& model, RemovalState& state,
                   RemovalPlan plan);

// Removes `batch` with one Newton step if its residual bound fits within
// `budget_remaining`; otherwise returns kRetrainRequired and leaves model and
// state untouched.
RemovalOutcome RemoveBatch(PerturbedModel& model, RemovalState& state,
                           RowSpan batch, const Dataset& data,
                           const ConvexLoss& loss, double budget_remaining);

// Same, but the decision and the charge go through `ledger`.
RemovalOutcome RemoveBatch(PerturbedModel& model, RemovalState& state,
                           RowSpan batch, const Dataset& data,
                           const ConvexLoss& loss, BudgetLedger& ledger);

}  // namespace certremove

#endif  // CERTREMOVE_REMOVAL_H_
