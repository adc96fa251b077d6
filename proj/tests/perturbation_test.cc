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

#include "certremove/perturbation.h"

#include <cmath>

#include <gtest/gtest.h>

#include "certremove/error.h"

namespace certremove {
namespace {

TEST(GaussianPerturbationTest, ZeroSigmaGivesZeroVector) {
  EXPECT_EQ(SamplePerturbationGaussian(7, 0.0, 3), Eigen::VectorXd::Zero(7));
}

TEST(GaussianPerturbationTest, SampleStdAtLargeDimension) {
  const Eigen::VectorXd b = SamplePerturbationGaussian(100000, 2.0, 5);
  const double mean = b.mean();
  const double sd = std::sqrt((b.array() - mean).square().sum() / (b.size() - 1));
  EXPECT_GE(sd, 1.98);
  EXPECT_LE(sd, 2.02);
  EXPECT_LT(std::abs(mean), 0.03);
}

TEST(GaussianPerturbationTest, DeterministicPerSeed) {
  EXPECT_EQ(SamplePerturbationGaussian(50, 1.5, 9), SamplePerturbationGaussian(50, 1.5, 9));
  EXPECT_NE(SamplePerturbationGaussian(50, 1.5, 9), SamplePerturbationGaussian(50, 1.5, 10));
}

TEST(GaussianPerturbationTest, RejectsBadArguments) {
  EXPECT_THROW(SamplePerturbationGaussian(0, 1.0, 0), Error);
  EXPECT_THROW(SamplePerturbationGaussian(3, -1.0, 0), Error);
}

TEST(SphericalGammaTest, DirectionIsUnitAndRadiusScales) {
  const SphericalGammaDraw draw = SampleSphericalGammaParts(3, 1.0, 0.5, 4);
  EXPECT_NEAR(draw.direction.norm(), 1.0, 1e-12);
  EXPECT_GT(draw.radius, 0.0);
  const Eigen::VectorXd b = SamplePerturbationSphericalGamma(3, 1.0, 0.5, 4);
  EXPECT_NEAR(b.norm() / draw.radius, 1.0, 1e-12);
  EXPECT_EQ(b, SamplePerturbationSphericalGamma(3, 1.0, 0.5, 4));
}

TEST(SphericalGammaTest, MeanNormMatchesGammaMean) {
  // E||b|| = d * eps' / eps = 5.
  double sum = 0.0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    sum += SamplePerturbationSphericalGamma(50, 1.0, 0.1, 1000 + k).norm();
  }
  const double mean = sum / draws;
  EXPECT_GE(mean, 4.9);
  EXPECT_LE(mean, 5.1);
}

TEST(SphericalGammaTest, RejectsNonPositiveParameters) {
  EXPECT_THROW(SampleSphericalGammaParts(3, 0.0, 1.0, 0), Error);
  EXPECT_THROW(SampleSphericalGammaParts(3, 1.0, -1.0, 0), Error);
}

}  // namespace
}  // namespace certremove
