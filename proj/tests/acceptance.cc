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

// Acceptance checks. Prints one PASS/FAIL line per criterion, with indented
// detail lines below it, and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "certremove/budget.h"
#include "certremove/commands.h"
#include "certremove/csv.h"
#include "certremove/oracle.h"
#include "certremove/perturbation.h"
#include "certremove/removal.h"
#include "certremove/synthetic.h"
#include "certremove/trainer.h"
#include "test_util.h"

namespace certremove {
namespace {

int failures = 0;

void Report(int id, const std::string& name, bool pass,
            const std::vector<std::string>& details) {
  std::printf("criterion %d %-28s %s\n", id, name.c_str(), pass ? "PASS" : "FAIL");
  for (const std::string& line : details) std::printf("    %s\n", line.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

double MillisSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Single-point ridge removal against brute-force retraining with the same b.
void LeastSquaresExactness() {
  testing::Gen gen(1001);
  const ConvexLoss loss = ConvexLoss::LeastSquares();
  double worst_gap = 0.0;
  double worst_retrain_gap = 0.0;
  int nonzero_increments = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = gen.Int(20, 500);
    const Eigen::Index d = gen.Int(2, 50);
    const double lambda = std::pow(10.0, gen.Uniform(-3.0, 0.0));
    const Dataset data = gen.RandomDataset(n, d, LossKind::kLeastSquares);
    PerturbedModel model = Train(data, loss, lambda, 1.0, 1.0, 1e-4,
                                 static_cast<std::uint64_t>(trial), 1e-11);
    RemovalState state = RemovalState::ForDataset(data);
    const std::vector<RowIndex> batch{static_cast<RowIndex>(gen.Int(0, n - 1))};
    const RemovalOutcome out = RemoveBatch(model, state, batch, data, loss, 1e300);
    if (out.residual_bound_increment != 0.0) ++nonzero_increments;
    const std::vector<RowIndex> live = state.LiveRows();
    const Eigen::VectorXd closed =
        oracle::ClosedFormRidge(data, live, lambda, model.perturbation);
    const Eigen::VectorXd retrained =
        oracle::RetrainExact(data, live, loss, lambda, model.perturbation, 1e-11);
    worst_gap = std::max(worst_gap, (model.weights - closed).norm());
    worst_retrain_gap = std::max(worst_retrain_gap, (model.weights - retrained).norm());
  }
  const double gap = std::max(worst_gap, worst_retrain_gap);
  Report(1, "least-squares exactness", gap <= 1e-7 && nonzero_increments == 0,
         {Fmt("50 instances, max gap vs closed form %.3e, vs iterative retrain %.3e "
              "(limit 1e-7)",
              worst_gap, worst_retrain_gap),
          Fmt("instances with nonzero increment: %d", nonzero_increments)});
}

// Data-dependent and worst-case bounds against the true residual.
void BoundDomination() {
  testing::Gen gen(1002);
  const ConvexLoss loss = ConvexLoss::Logistic();
  int instances = 0;
  int data_violations = 0;
  int worst_violations = 0;
  double max_ratio = 0.0;
  const int reps[] = {13, 13, 13, 13, 12, 12, 12, 12};
  int cell = 0;
  for (Eigen::Index n : {50, 500}) {
    for (Eigen::Index d : {5, 50}) {
      for (double lambda : {1e-3, 1e-1}) {
        for (int rep = 0; rep < reps[cell]; ++rep) {
          const double tol = 1e-13 * static_cast<double>(n);
          const Dataset data = gen.RandomDataset(n, d, LossKind::kLogistic);
          const PerturbedModel model =
              Train(data, loss, lambda, 1.0, 1.0, 1e-4,
                    static_cast<std::uint64_t>(gen.Int(0, 1 << 30)), tol);
          const RemovalState state = RemovalState::ForDataset(data);
          const std::vector<RowIndex> batch{static_cast<RowIndex>(gen.Int(0, n - 1))};
          const RemovalPlan plan = PlanRemoval(model, state, batch, data, loss);
          const double residual = oracle::TrueResidualPerturbed(
              plan.new_weights, data, plan.live_after, loss, lambda, model.perturbation);
          if (residual > plan.increment + 1e-9) ++data_violations;
          if (!plan.worst_case || *plan.worst_case < residual) ++worst_violations;
          if (plan.increment > 0.0) max_ratio = std::max(max_ratio, residual / plan.increment);
          ++instances;
        }
        ++cell;
      }
    }
  }
  Report(2, "bound domination",
         instances == 100 && data_violations == 0 && worst_violations == 0,
         {Fmt("%d instances; data-dependent violations %d, worst-case violations %d",
              instances, data_violations, worst_violations),
          Fmt("max true residual / data-dependent bound: %.3e", max_ratio)});
}

void WorstCaseFormula() {
  const ConvexLoss loss = ConvexLoss::Logistic();
  const double one =
      ResidualBoundWorstCase(loss.hessian_lipschitz, loss.grad_norm_bound, 1e-3, 1001, 1);
  const double two =
      ResidualBoundWorstCase(loss.hessian_lipschitz, loss.grad_norm_bound, 1e-3, 1002, 2);
  const double rel1 = std::abs(one - 1000.0) / 1000.0;
  const double rel2 = std::abs(two - 4000.0) / 4000.0;
  Report(3, "worst-case formula values", rel1 <= 1e-9 && rel2 <= 1e-9,
         {Fmt("m=1 n=1001: %.12g (rel err %.2e)", one, rel1),
          Fmt("m=2 n=1002: %.12g (rel err %.2e)", two, rel2)});
}

// Median true residual of a single-point removal at growing n.
void ResidualShrinkage() {
  const ConvexLoss loss = ConvexLoss::Logistic();
  constexpr double kLambda = 1e-2;
  std::vector<double> medians;
  std::vector<std::string> details;
  for (Eigen::Index n : {100, 1000, 10000}) {
    testing::Gen gen(1004 + static_cast<std::uint64_t>(n));
    std::vector<double> residuals;
    double max_grad = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Dataset data = gen.RandomDataset(n, 20, LossKind::kLogistic);
      const double tol = 1e-14 * static_cast<double>(n);
      const PerturbedModel model =
          Train(data, loss, kLambda, 1.0, 1.0, 1e-4,
                static_cast<std::uint64_t>(gen.Int(0, 1 << 30)), tol);
      max_grad = std::max(max_grad, model.attained_grad_norm);
      const RemovalState state = RemovalState::ForDataset(data);
      const std::vector<RowIndex> batch{static_cast<RowIndex>(gen.Int(0, n - 1))};
      const RemovalPlan plan = PlanRemoval(model, state, batch, data, loss);
      residuals.push_back(oracle::TrueResidualPerturbed(
          plan.new_weights, data, plan.live_after, loss, kLambda, model.perturbation));
    }
    medians.push_back(Median(residuals));
    details.push_back(Fmt("n=%-6lld median true residual %.4e (max training gradient %.1e)",
                          static_cast<long long>(n), medians.back(), max_grad));
  }
  Report(4, "residual shrinkage", medians[0] > medians[1] && medians[1] > medians[2],
         details);
}

void BudgetSemantics() {
  // High-precision value of sqrt(2 ln(15000)), computed independently.
  constexpr double kOracleC = 4.3853860674025832268;
  constexpr double kStatedC = 4.385334;
  const double c = NoiseMultiplier(1e-4);
  const bool stated_ok = std::abs(c - kStatedC) <= 1e-9;
  const bool oracle_ok = std::abs(c - kOracleC) <= 1e-9;

  // A charge sequence that lands exactly on beta_max, then one ulp past it.
  BudgetLedger ledger = BudgetLedger::Make(1.0, 1e-4, 1.0);
  const double beta_max = ledger.beta_max();
  bool sequence_ok = true;
  const double quarter = beta_max / 4;
  for (int k = 0; k < 3; ++k) {
    sequence_ok &= ledger.TryCharge(quarter, 1) == ChargeDecision::kAccepted;
  }
  const double last = beta_max - ledger.beta_accumulated();
  sequence_ok &= ledger.TryCharge(last, 1) == ChargeDecision::kAccepted;
  sequence_ok &= ledger.beta_accumulated() == beta_max;
  const double tiny = std::nextafter(beta_max, 1.0) - beta_max;
  const BudgetLedger before = ledger;
  sequence_ok &= ledger.TryCharge(tiny, 1) == ChargeDecision::kRetrainRequired;
  const bool unchanged = ledger.beta_accumulated() == before.beta_accumulated() &&
                         ledger.entries().size() == before.entries().size() &&
                         ledger.entries().size() == 4;
  sequence_ok &= ledger.TryCharge(0.0, 1) == ChargeDecision::kAccepted;

  Report(5, "budget semantics", stated_ok && oracle_ok && sequence_ok && unchanged,
         {Fmt("c(1e-4) = %.17g; stated 4.385334 differs by %.3e (limit 1e-9): %s", c,
              std::abs(c - kStatedC), stated_ok ? "ok" : "mismatch"),
          Fmt("independent high-precision value %.17g differs by %.3e: %s", kOracleC,
              std::abs(c - kOracleC), oracle_ok ? "ok" : "mismatch"),
          Fmt("charges reaching beta_max accepted, first exceeding charge rejected: %s",
              sequence_ok ? "ok" : "wrong"),
          Fmt("rejected charge left the ledger untouched: %s", unchanged ? "ok" : "mutated")});
}

void NoiseCalibration() {
  constexpr int kDraws = 100000;
  double norm_sum = 0.0;
  for (int k = 0; k < kDraws; ++k) {
    norm_sum += SamplePerturbationSphericalGamma(50, 1.0, 0.1, 0x5eed0000 + k).norm();
  }
  const double mean_norm = norm_sum / kDraws;
  const double sigma = 1.5;
  const Eigen::VectorXd b = SamplePerturbationGaussian(kDraws, sigma, 2024);
  const double mean = b.mean();
  const double sd = std::sqrt((b.array() - mean).square().sum() / (kDraws - 1));
  const double rel = std::abs(sd - sigma) / sigma;
  Report(6, "noise calibration", mean_norm >= 4.9 && mean_norm <= 5.1 && rel <= 0.01,
         {Fmt("spherical gamma mean norm %.4f (target [4.9, 5.1])", mean_norm),
          Fmt("gaussian std %.5f for sigma %.2f (rel err %.3e, limit 1e-2)", sd, sigma, rel)});
}

// End-to-end command wall-clock at pixel-image scale.
void RemovalSpeed() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "certremove_acceptance";
  fs::create_directories(dir);
  const std::string data_path = (dir / "pixels.csv").string();
  const std::string model_path = (dir / "pixels.json").string();
  WriteCsv(data_path, synthetic::PixelTask(10000, 784, 7));

  std::ostringstream sink;
  cli::TrainArgs train;
  train.data_path = data_path;
  train.out_path = model_path;
  train.lambda = 1e-4;
  train.sigma = 1.0;
  train.seed = 1;
  const cli::TrainSummary trained = cli::CmdTrain(train, sink, sink);

  std::vector<double> remove_wall, remove_compute, retrain_wall, retrain_compute;
  for (int rep = 0; rep < 3; ++rep) {
    cli::RemoveArgs remove;
    remove.model_path = model_path;
    remove.data_path = data_path;
    remove.indices = std::to_string(100 * rep + 17);
    auto t0 = std::chrono::steady_clock::now();
    const cli::RemoveSummary removed = cli::CmdRemove(remove, sink, sink);
    remove_wall.push_back(MillisSince(t0));
    remove_compute.push_back(removed.removal_ms);

    cli::RetrainArgs retrain;
    retrain.model_path = model_path;
    retrain.data_path = data_path;
    retrain.seed = 1000 + static_cast<std::uint64_t>(rep);
    t0 = std::chrono::steady_clock::now();
    const cli::RetrainSummary retrained = cli::CmdRetrain(retrain, sink, sink);
    retrain_wall.push_back(MillisSince(t0));
    retrain_compute.push_back(retrained.retrain_ms);
  }
  fs::remove_all(dir);

  const double ratio = Median(retrain_wall) / Median(remove_wall);
  const double compute_ratio = Median(retrain_compute) / Median(remove_compute);
  Report(7, "removal vs retrain speed", ratio >= 10.0,
         {Fmt("n=10000 d=784 lambda=1e-4, train accuracy %.4f", trained.train_accuracy),
          Fmt("median wall-clock: remove %.0f ms, retrain %.0f ms, ratio %.2f (need >= 10)",
              Median(remove_wall), Median(retrain_wall), ratio),
          Fmt("excluding file parsing: removal %.0f ms, retrain %.0f ms, ratio %.2f",
              Median(remove_compute), Median(retrain_compute), compute_ratio)});
}

// Supported removals and test accuracy across lambda at fixed sigma.
void TradeOffDirection() {
  const synthetic::SplitTask task = synthetic::AnisotropicTask(2000, 4000, 20, 8);
  const ConvexLoss loss = ConvexLoss::Logistic();
  constexpr double kSigma = 1.0;
  const std::vector<double> lambdas = {1e-4, 1e-3, 1e-2, 1e-1};
  std::vector<double> removals;
  std::vector<double> accuracy;
  std::vector<std::string> details;
  for (double lambda : lambdas) {
    const cli::SweepPoint point = cli::RunSweepPoint(
        task.train, task.test, loss, lambda, kSigma, 1.0, 1e-4, 5, 8, 1000, 1e-8);
    std::vector<double> counts(point.supported_removals.begin(),
                               point.supported_removals.end());
    removals.push_back(Median(counts));
    accuracy.push_back(Median(point.test_accuracy));
    const auto capped = std::count(point.hit_cap.begin(), point.hit_cap.end(), true);
    details.push_back(Fmt("lambda=%-6g median removals %-6g test accuracy %.4f capped %d/5",
                          lambda, removals.back(), accuracy.back(),
                          static_cast<int>(capped)));
  }
  bool monotone = true;
  for (size_t k = 1; k < removals.size(); ++k) monotone &= removals[k] >= removals[k - 1];
  const double best = *std::max_element(accuracy.begin(), accuracy.end());
  const bool tradeoff = accuracy.back() < best;
  details.push_back(Fmt("removals non-decreasing: %s; accuracy at largest lambda below best: %s",
                        monotone ? "yes" : "no", tradeoff ? "yes" : "no"));
  Report(8, "trade-off direction", monotone && tradeoff, details);
}

}  // namespace
}  // namespace certremove

int main() {
  using namespace certremove;
  LeastSquaresExactness();
  BoundDomination();
  WorstCaseFormula();
  ResidualShrinkage();
  BudgetSemantics();
  NoiseCalibration();
  RemovalSpeed();
  TradeOffDirection();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
