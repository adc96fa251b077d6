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

#include "certremove/removal.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "certremove/error.h"
#include "certremove/kernels.h"

namespace certremove {
namespace {

constexpr double kSpectralInflation = 1e-10;
constexpr double kSolveResidualTol = 1e-10;

void CheckRowsInRange(RowSpan rows, Eigen::Index n) {
  std::unordered_set<RowIndex> seen;
  for (RowIndex i : rows) {
    if (i < 0 || i >= n) {
      throw Error(ErrorCode::kStaleIndex,
                  "row " + std::to_string(i) + " is out of range [0, " +
                      std::to_string(n) + ")");
    }
    if (!seen.insert(i).second) {
      throw Error(ErrorCode::kStaleIndex,
                  "row " + std::to_string(i) + " appears twice in the batch");
    }
  }
}

}  // namespace

RemovalState RemovalState::ForDataset(const Dataset& data) {
  return ForLiveMask(data, std::vector<std::uint8_t>(
                               static_cast<size_t>(data.rows()), 1));
}

RemovalState RemovalState::ForLiveMask(const Dataset& data,
                                       std::vector<std::uint8_t> live_mask) {
  if (static_cast<Eigen::Index>(live_mask.size()) != data.rows()) {
    throw Error(ErrorCode::kShape, "live mask length does not match row count");
  }
  RemovalState state;
  state.live_mask = std::move(live_mask);
  const std::vector<RowIndex> live = state.LiveRows();
  state.live_count = static_cast<Eigen::Index>(live.size());
  state.gram = kernels::Gramian(data.features, live);
  return state;
}

bool RemovalState::IsLive(RowIndex i) const {
  return i >= 0 && i < static_cast<RowIndex>(live_mask.size()) &&
         live_mask[static_cast<size_t>(i)] != 0;
}

std::vector<RowIndex> RemovalState::LiveRows() const {
  std::vector<RowIndex> rows;
  rows.reserve(static_cast<size_t>(live_count));
  for (size_t i = 0; i < live_mask.size(); ++i) {
    if (live_mask[i] != 0) rows.push_back(static_cast<RowIndex>(i));
  }
  return rows;
}

void ValidateBatch(const RemovalState& state, RowSpan batch) {
  if (batch.empty()) {
    throw Error(ErrorCode::kStaleIndex, "removal batch is empty");
  }
  CheckRowsInRange(batch, static_cast<Eigen::Index>(state.live_mask.size()));
  for (RowIndex i : batch) {
    if (!state.IsLive(i)) {
      throw Error(ErrorCode::kStaleIndex,
                  "row " + std::to_string(i) + " was already removed");
    }
  }
  if (static_cast<Eigen::Index>(batch.size()) >= state.live_count) {
    throw Error(ErrorCode::kParameter,
                "removal would leave no live rows; retrain instead");
  }
}

Eigen::VectorXd ComputeDelta(const Eigen::VectorXd& w, RowSpan batch,
                             const Dataset& data, const ConvexLoss& loss,
                             double lambda) {
  CheckDimension(data, w.size(), "weight vector");
  if (batch.empty()) {
    throw Error(ErrorCode::kStaleIndex, "removal batch is empty");
  }
  CheckRowsInRange(batch, data.rows());
  const Eigen::VectorXd z = kernels::Margins(data.features, batch, w);
  Eigen::VectorXd coeffs(z.size());
  for (size_t k = 0; k < batch.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    coeffs[kk] = LossFirstDeriv(loss, z[kk], data.targets[batch[k]]);
  }
  Eigen::VectorXd delta = kernels::WeightedRowSum(data.features, batch, coeffs);
  delta += static_cast<double>(batch.size()) * lambda * w;
  return delta;
}

Eigen::MatrixXd ComputeHessian(const Eigen::VectorXd& w, RowSpan live_rows,
                               const Dataset& data, const ConvexLoss& loss,
                               double lambda) {
  CheckDimension(data, w.size(), "weight vector");
  if (live_rows.empty()) {
    throw Error(ErrorCode::kParameter, "hessian needs at least one live row");
  }
  const Eigen::VectorXd curvature =
      kernels::SecondDerivatives(data, live_rows, w, loss.kind);
  Eigen::MatrixXd hessian =
      kernels::WeightedGramian(data.features, live_rows, curvature);
  hessian.diagonal().array() += lambda * static_cast<double>(live_rows.size());
  return hessian;
}

Eigen::VectorXd SolveNewtonSystem(const Eigen::MatrixXd& hessian,
                                  const Eigen::VectorXd& delta) {
  if (hessian.rows() != hessian.cols() || hessian.rows() != delta.size()) {
    throw Error(ErrorCode::kShape, "hessian and delta dimensions disagree");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumeric, "hessian is not positive definite");
  }
  Eigen::VectorXd step = llt.solve(delta);
  step += llt.solve(delta - hessian * step);
  const double residual = (hessian * step - delta).norm();
  if (!(residual <= kSolveResidualTol * delta.norm()) && residual != 0.0) {
    throw Error(ErrorCode::kNumeric,
                "newton solve residual " + std::to_string(residual) +
                    " exceeds tolerance");
  }
  return step;
}

Eigen::VectorXd NewtonUpdate(const Eigen::VectorXd& w,
                             const Eigen::MatrixXd& hessian,
                             const Eigen::VectorXd& delta) {
  if (w.size() != delta.size()) {
    throw Error(ErrorCode::kShape, "weights and delta dimensions disagree");
  }
  return w + SolveNewtonSystem(hessian, delta);
}

double SpectralNormOfRows(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols()) {
    throw Error(ErrorCode::kShape, "gram matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumeric, "eigendecomposition of gram matrix failed");
  }
  const double top = std::max(0.0, eig.eigenvalues().maxCoeff());
  return std::sqrt(top) * (1.0 + kSpectralInflation);
}

double ResidualBoundDataDependent(double gamma, const Eigen::MatrixXd& gram,
                                  const Eigen::VectorXd& step,
                                  const Dataset& data, RowSpan live_rows) {
  CheckDimension(data, step.size(), "newton step");
  if (gamma == 0.0) return 0.0;
  return gamma * SpectralNormOfRows(gram) * step.norm() *
         kernels::ProjectedNorm(data.features, live_rows, step);
}

double ResidualBoundWorstCase(double gamma, std::optional<double> grad_bound,
                              double lambda, Eigen::Index n_before,
                              Eigen::Index m) {
  if (m < 1 || n_before <= m) {
    throw Error(ErrorCode::kParameter, "worst-case bound needs n > m >= 1");
  }
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kParameter, "lambda must be > 0");
  }
  if (!grad_bound.has_value()) {
    throw Error(ErrorCode::kUnsupported,
                "worst-case bound needs a finite gradient bound C");
  }
  const double c = *grad_bound;
  const double md = static_cast<double>(m);
  return 4.0 * gamma * md * md * c * c /
         (lambda * lambda * static_cast<double>(n_before - m));
}

RemovalPlan PlanRemoval(const PerturbedModel& model, const RemovalState& state,
                        RowSpan batch, const Dataset& data,
                        const ConvexLoss& loss) {
  if (static_cast<Eigen::Index>(state.live_mask.size()) != data.rows()) {
    throw Error(ErrorCode::kShape, "removal state does not match the dataset");
  }
  ValidateBatch(state, batch);

  RemovalPlan plan;
  plan.batch.assign(batch.begin(), batch.end());
  std::vector<std::uint8_t> mask_after = state.live_mask;
  for (RowIndex i : batch) mask_after[static_cast<size_t>(i)] = 0;
  for (size_t i = 0; i < mask_after.size(); ++i) {
    if (mask_after[i] != 0) plan.live_after.push_back(static_cast<RowIndex>(i));
  }

  plan.delta = ComputeDelta(model.weights, batch, data, loss, model.lambda);
  const Eigen::MatrixXd hessian =
      ComputeHessian(model.weights, plan.live_after, data, loss, model.lambda);
  plan.step = SolveNewtonSystem(hessian, plan.delta);
  plan.new_weights = model.weights + plan.step;

  plan.gram_after = state.gram;
  for (RowIndex i : batch) {
    const auto x = data.features.row(i);
    plan.gram_after.noalias() -= x.transpose() * x;
  }

  if (loss.hessian_lipschitz != 0.0) {
    plan.spectral_norm = SpectralNormOfRows(plan.gram_after);
    plan.projected_step_norm =
        kernels::ProjectedNorm(data.features, plan.live_after, plan.step);
    plan.increment = loss.hessian_lipschitz * plan.spectral_norm *
                     plan.step.norm() * plan.projected_step_norm;
  }
  if (loss.grad_norm_bound.has_value()) {
    plan.worst_case = ResidualBoundWorstCase(
        loss.hessian_lipschitz, loss.grad_norm_bound, model.lambda,
        state.live_count, static_cast<Eigen::Index>(batch.size()));
  }
  return plan;
}

void CommitRemoval(PerturbedModel& model, RemovalState& state,
                   RemovalPlan plan) {
  for (RowIndex i : plan.batch) state.live_mask[static_cast<size_t>(i)] = 0;
  state.live_count -= static_cast<Eigen::Index>(plan.batch.size());
  state.gram = std::move(plan.gram_after);
  state.history.push_back(std::move(plan.batch));
  model.weights = std::move(plan.new_weights);
}

namespace {

RemovalOutcome OutcomeFor(const RemovalPlan& plan) {
  RemovalOutcome outcome;
  outcome.residual_bound_increment = plan.increment;
  outcome.worst_case_increment = plan.worst_case;
  outcome.update_norm = plan.step.norm();
  return outcome;
}

}  // namespace

RemovalOutcome RemoveBatch(PerturbedModel& model, RemovalState& state,
                           RowSpan batch, const Dataset& data,
                           const ConvexLoss& loss, double budget_remaining) {
  RemovalPlan plan = PlanRemoval(model, state, batch, data, loss);
  RemovalOutcome outcome = OutcomeFor(plan);
  if (plan.increment > budget_remaining) {
    outcome.status = RemovalStatus::kRetrainRequired;
    return outcome;
  }
  outcome.status = RemovalStatus::kApplied;
  outcome.new_weights = plan.new_weights;
  CommitRemoval(model, state, std::move(plan));
  return outcome;
}

RemovalOutcome RemoveBatch(PerturbedModel& model, RemovalState& state,
                           RowSpan batch, const Dataset& data,
                           const ConvexLoss& loss, BudgetLedger& ledger) {
  RemovalPlan plan = PlanRemoval(model, state, batch, data, loss);
  RemovalOutcome outcome = OutcomeFor(plan);
  if (ledger.TryCharge(plan.increment, static_cast<Eigen::Index>(batch.size())) ==
      ChargeDecision::kRetrainRequired) {
    outcome.status = RemovalStatus::kRetrainRequired;
    return outcome;
  }
  outcome.status = RemovalStatus::kApplied;
  outcome.new_weights = plan.new_weights;
  CommitRemoval(model, state, std::move(plan));
  return outcome;
}

}  // namespace certremove
