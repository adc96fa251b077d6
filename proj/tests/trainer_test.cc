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

#include <cmath>

#include <gtest/gtest.h>

#include "certremove/error.h"
#include "certremove/kernels_reference.h"
#include "certremove/oracle.h"
#include "certremove/perturbation.h"
#include "test_util.h"

namespace certremove {
namespace {

Dataset Balanced() {
  FeatureMatrix x(4, 2);
  x << 0.5, 0.1, -0.2, 0.4, 0.3, -0.6, -0.1, -0.2;
  Eigen::VectorXd y(4);
  y << 1, -1, 1, -1;
  return MakeDataset(x, y);
}

TEST(ObjectiveTest, ZeroWeightsLogistic) {
  const Dataset data = Balanced();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const Objective obj = ObjectiveAndGradient(zero, data, ConvexLoss::Logistic(), 0.3, zero);
  EXPECT_NEAR(obj.value, 4 * std::log(2.0), 1e-15);
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(2);
  for (Eigen::Index i = 0; i < 4; ++i) {
    expect -= 0.5 * data.targets[i] * data.features.row(i).transpose();
  }
  EXPECT_LE((obj.gradient - expect).norm(), 1e-16);

  Eigen::VectorXd b(2);
  b << 0.7, -1.1;
  const Objective shifted = ObjectiveAndGradient(zero, data, ConvexLoss::Logistic(), 0.3, b);
  EXPECT_EQ(shifted.value, obj.value);
  EXPECT_LE((shifted.gradient - obj.gradient - b).norm(), 1e-16);
}

TEST(ObjectiveTest, RegularizerUsesHalfLambdaN) {
  const Dataset data = Balanced();
  Eigen::VectorXd w(2);
  w << 0.4, -0.2;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const ConvexLoss loss = ConvexLoss::Logistic();
  const double lam = 0.5;
  const Objective a = ObjectiveAndGradient(w, data, loss, lam, zero);
  const Objective b = ObjectiveAndGradient(w, data, loss, 2 * lam, zero);
  EXPECT_NEAR(b.value - a.value, 0.5 * lam * 4 * w.squaredNorm(), 1e-14);
  EXPECT_LE((b.gradient - a.gradient - lam * 4 * w).norm(), 1e-14);
}

TEST(ObjectiveTest, GradientMatchesFiniteDifferences) {
  testing::Gen gen(51);
  for (LossKind kind : {LossKind::kLogistic, LossKind::kLeastSquares}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Dataset data = gen.RandomDataset(20, 5, kind);
      const ConvexLoss loss = ConvexLoss::FromKind(kind);
      const Eigen::VectorXd w = gen.Vector(5);
      const Eigen::VectorXd b = gen.Vector(5);
      const double lam = gen.Uniform(1e-3, 1.0);
      const Objective obj = ObjectiveAndGradient(w, data, loss, lam, b);
      Eigen::VectorXd fd(5);
      const double h = 1e-6;
      for (Eigen::Index j = 0; j < 5; ++j) {
        Eigen::VectorXd wp = w;
        Eigen::VectorXd wm = w;
        wp[j] += h;
        wm[j] -= h;
        fd[j] = (ObjectiveAndGradient(wp, data, loss, lam, b).value -
                 ObjectiveAndGradient(wm, data, loss, lam, b).value) / (2 * h);
      }
      EXPECT_LE((fd - obj.gradient).norm(), 1e-6 * obj.gradient.norm());
    }
  }
}

TEST(ObjectiveTest, RejectsShapeMismatch) {
  const Dataset data = Balanced();
  EXPECT_THROW(ObjectiveAndGradient(Eigen::VectorXd::Zero(3), data, ConvexLoss::Logistic(), 1.0,
                                    Eigen::VectorXd::Zero(2)),
               Error);
  EXPECT_THROW(ObjectiveAndGradient(Eigen::VectorXd::Zero(2), data, ConvexLoss::Logistic(), 1.0,
                                    Eigen::VectorXd::Zero(3)),
               Error);
}

TEST(TrainTest, LeastSquaresMatchesNormalEquations) {
  FeatureMatrix x(3, 2);
  x << 0.5, 0.2, -0.3, 0.6, 0.1, -0.7;
  Eigen::VectorXd y(3);
  y << 0.4, -1.0, 0.3;
  const Dataset data = MakeDataset(x, y);
  const double lam = 0.2;
  const PerturbedModel model =
      Train(data, ConvexLoss::LeastSquares(), lam, 0.0, 1.0, 1e-4, 0, 1e-12);
  // grad = 2 X'(Xw - y) + lambda n w = 0.
  const Eigen::MatrixXd xd = x;
  const Eigen::MatrixXd a = 2 * xd.transpose() * xd + lam * 3 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd expect = a.ldlt().solve(2 * xd.transpose() * y);
  EXPECT_LE((model.weights - expect).norm(), 1e-8);
}

TEST(TrainTest, SeparablePairReachesTolerance) {
  FeatureMatrix x(2, 2);
  x << 1, 0, -1, 0;
  Eigen::VectorXd y(2);
  y << 1, -1;
  const PerturbedModel model =
      Train(MakeDataset(x, y), ConvexLoss::Logistic(), 1.0, 0.0, 1.0, 1e-4, 0, 1e-12);
  EXPECT_LE(model.attained_grad_norm, 1e-12);
  EXPECT_GT(model.weights[0], 0.0);
}

TEST(TrainTest, DeterministicAndRecordsParameters) {
  testing::Gen gen(52);
  const Dataset data = gen.RandomDataset(300, 8, LossKind::kLogistic);
  const PerturbedModel a = Train(data, ConvexLoss::Logistic(), 1e-2, 0.5, 1.0, 1e-4, 17, 1e-9);
  const PerturbedModel b = Train(data, ConvexLoss::Logistic(), 1e-2, 0.5, 1.0, 1e-4, 17, 1e-9);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.perturbation, SamplePerturbationGaussian(8, 0.5, 17));
  EXPECT_EQ(a.sigma, 0.5);
  EXPECT_EQ(a.epsilon, 1.0);
  EXPECT_EQ(a.delta, 1e-4);
  EXPECT_EQ(a.seed, 17u);
  EXPECT_EQ(a.grad_tol, 1e-9);
}

// The attained gradient norm is re-checked with the serial reference kernels
// and the solution agrees with an independent Newton solver.
TEST(TrainPropertyTest, OptimalAndUnique) {
  testing::Gen gen(53);
  for (int trial = 0; trial < 30; ++trial) {
    const LossKind kind = trial % 3 == 0 ? LossKind::kLeastSquares : LossKind::kLogistic;
    const ConvexLoss loss = ConvexLoss::FromKind(kind);
    const Eigen::Index n = gen.Int(5, 400);
    const Eigen::Index d = gen.Int(1, 30);
    const Dataset data = gen.RandomDataset(n, d, kind);
    const double lam = std::pow(10.0, gen.Uniform(-4.0, 0.0));
    const double tol = DefaultGradTol(n);
    const PerturbedModel model = Train(data, loss, lam, gen.Uniform(0.0, 2.0), 1.0, 1e-4,
                                       static_cast<std::uint64_t>(trial), tol);
    const std::vector<RowIndex> rows = AllRows(data);
    const kernels::LossSums sums =
        reference::LossValueAndGradient(data, rows, model.weights, kind);
    const Eigen::VectorXd grad =
        sums.gradient + lam * static_cast<double>(n) * model.weights + model.perturbation;
    EXPECT_LE(grad.norm(), tol * 1.01) << "trial " << trial;

    const Eigen::VectorXd w_oracle =
        oracle::RetrainExact(data, rows, loss, lam, model.perturbation, tol);
    EXPECT_LE((w_oracle - model.weights).norm(), 2 * 10 * tol / (lam * static_cast<double>(n)))
        << "trial " << trial;
  }
}

// grad L_b(w) - grad L_{-b}(w) = 2b at any w.
TEST(TrainPropertyTest, PerturbationEntersLinearly) {
  testing::Gen gen(54);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = gen.RandomDataset(50, 6, LossKind::kLogistic);
    const Eigen::VectorXd b = SamplePerturbationGaussian(6, 1.0, static_cast<std::uint64_t>(trial));
    const ConvexLoss loss = ConvexLoss::Logistic();
    const PerturbedModel plus = TrainWithPerturbation(data, AllRows(data), loss, 0.1, b, 1e-10);
    const PerturbedModel minus =
        TrainWithPerturbation(data, AllRows(data), loss, 0.1, -b, 1e-10);
    for (const Eigen::VectorXd& w : {plus.weights, minus.weights}) {
      const Eigen::VectorXd diff = ObjectiveAndGradient(w, data, loss, 0.1, b).gradient -
                                   ObjectiveAndGradient(w, data, loss, 0.1, -b).gradient;
      EXPECT_LE((diff - 2 * b).norm(), 1e-10);
    }
  }
}

TEST(TrainTest, ConvergenceErrorCarriesBestIterate) {
  testing::Gen gen(55);
  const Dataset data = gen.RandomDataset(100, 5, LossKind::kLogistic);
  SolverOptions options;
  options.max_lbfgs_iterations = 1;
  options.max_newton_iterations = 0;
  try {
    Train(data, ConvexLoss::Logistic(), 1e-3, 0.0, 1.0, 1e-4, 0, 1e-12, options);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConvergence);
    EXPECT_EQ(e.best_iterate().size(), 5);
    EXPECT_GT(e.best_grad_norm(), 1e-12);
  }
}

TEST(TrainTest, RejectsBadInputs) {
  const Dataset data = Balanced();
  const ConvexLoss loss = ConvexLoss::Logistic();
  EXPECT_THROW(Train(data, loss, 0.0, 1.0, 1.0, 1e-4, 0, 1e-8), Error);
  EXPECT_THROW(Train(data, loss, 1.0, 1.0, 1.0, 1e-4, 0, 0.0), Error);
  EXPECT_THROW(Train(data, loss, 1.0, 1.0, 0.0, 1e-4, 0, 1e-8), Error);
  EXPECT_THROW(Train(data, loss, 1.0, -1.0, 1.0, 1e-4, 0, 1e-8), Error);
  FeatureMatrix big(1, 1);
  big << 3.0;
  EXPECT_THROW(Train(MakeDataset(big, Eigen::VectorXd::Ones(1)), loss, 1.0, 1.0, 1.0, 1e-4, 0,
                     1e-8),
               Error);
  Dataset bad_targets = Balanced();
  bad_targets.targets[0] = 0.5;
  EXPECT_THROW(Train(bad_targets, loss, 1.0, 1.0, 1.0, 1e-4, 0, 1e-8), Error);
  EXPECT_DOUBLE_EQ(DefaultGradTol(0), 1e-10);
  EXPECT_DOUBLE_EQ(DefaultGradTol(500), 5e-8);
}

}  // namespace
}  // namespace certremove
