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

#include "certremove/oracle.h"

#include <cmath>
#include <string>

#include "certremove/error.h"
#include "certremove/kernels_reference.h"

namespace certremove::oracle {
namespace {

constexpr int kMaxNewtonIterations = 200;

struct ValueGrad {
  double value;
  Eigen::VectorXd grad;
};

ValueGrad Evaluate(const Eigen::VectorXd& w, const Dataset& data, RowSpan rows,
                   LossKind kind, double lambda, const Eigen::VectorXd& b) {
  const double reg = lambda * static_cast<double>(rows.size());
  kernels::LossSums sums = reference::LossValueAndGradient(data, rows, w, kind);
  return {sums.value + 0.5 * reg * w.squaredNorm() + b.dot(w),
          sums.gradient + reg * w + b};
}

}  // namespace

Eigen::VectorXd RetrainExact(const Dataset& data, RowSpan live_rows,
                             const ConvexLoss& loss, double lambda,
                             const Eigen::VectorXd& b, double grad_tol) {
  if (live_rows.empty()) {
    throw Error(ErrorCode::kParameter, "cannot retrain on an empty row set");
  }
  CheckDimension(data, b.size(), "perturbation vector");
  const double reg = lambda * static_cast<double>(live_rows.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(data.dim());
  ValueGrad cur = Evaluate(w, data, live_rows, loss.kind, lambda, b);
  double gnorm = cur.grad.norm();
  for (int it = 0; it < kMaxNewtonIterations && gnorm > grad_tol; ++it) {
    Eigen::MatrixXd h = reference::WeightedGramian(
        data.features, live_rows,
        reference::SecondDerivatives(data, live_rows, w, loss.kind));
    h.diagonal().array() += reg;
    const Eigen::VectorXd dir = -h.ldlt().solve(cur.grad);
    const double slope = cur.grad.dot(dir);
    bool moved = false;
    for (double step = 1.0; step > 1e-20; step *= 0.5) {
      Eigen::VectorXd trial = w + step * dir;
      ValueGrad next = Evaluate(trial, data, live_rows, loss.kind, lambda, b);
      const double next_norm = next.grad.norm();
      if (next.value <= cur.value + 1e-4 * step * slope || next_norm < gnorm) {
        w = std::move(trial);
        cur = std::move(next);
        gnorm = next_norm;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (gnorm > grad_tol) {
    throw ConvergenceError("oracle retrain stopped at gradient norm " +
                               std::to_string(gnorm),
                           w, gnorm);
  }
  return w;
}

Eigen::VectorXd ClosedFormRidge(const Dataset& data, RowSpan rows,
                                double lambda, const Eigen::VectorXd& b) {
  CheckDimension(data, b.size(), "perturbation vector");
  const Eigen::Index d = data.dim();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd rhs = -b;
  for (RowIndex i : rows) {
    const Eigen::VectorXd x = data.features.row(i).transpose();
    a += 2.0 * x * x.transpose();
    rhs += 2.0 * data.targets[i] * x;
  }
  a.diagonal().array() += lambda * static_cast<double>(rows.size());
  return a.fullPivLu().solve(rhs);
}

double TrueResidual(const Eigen::VectorXd& w, const Dataset& data,
                    RowSpan live_rows, const ConvexLoss& loss, double lambda) {
  return TrueResidualPerturbed(w, data, live_rows, loss, lambda,
                               Eigen::VectorXd::Zero(w.size()));
}

double TrueResidualPerturbed(const Eigen::VectorXd& w, const Dataset& data,
                             RowSpan live_rows, const ConvexLoss& loss,
                             double lambda, const Eigen::VectorXd& b) {
  CheckDimension(data, w.size(), "weight vector");
  CheckDimension(data, b.size(), "perturbation vector");
  const kernels::LossSums sums =
      reference::LossValueAndGradient(data, live_rows, w, loss.kind);
  const double reg = lambda * static_cast<double>(live_rows.size());
  return (sums.gradient + reg * w + b).norm();
}

AuditReport AuditRemoval(const PerturbedModel& before,
                         const Eigen::VectorXd& weights_after,
                         RowSpan live_after, const Dataset& data,
                         const ConvexLoss& loss, double claimed_bound,
                         std::optional<double> worst_case_bound) {
  AuditReport report;
  report.claimed_bound = claimed_bound;
  report.worst_case_bound = worst_case_bound;
  report.true_residual_norm = TrueResidualPerturbed(
      weights_after, data, live_after, loss, before.lambda, before.perturbation);
  report.unperturbed_residual_norm =
      TrueResidual(weights_after, data, live_after, loss, before.lambda);
  const Eigen::VectorXd retrained = RetrainExact(
      data, live_after, loss, before.lambda, before.perturbation, before.grad_tol);
  report.weight_gap = (weights_after - retrained).norm();
  report.slack = 1e-9 + 10.0 * before.grad_tol;
  report.bound_holds =
      report.claimed_bound >= report.true_residual_norm - report.slack;
  return report;
}

}  // namespace certremove::oracle
