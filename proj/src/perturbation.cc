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

#include <random>

#include "certremove/error.h"

namespace certremove {

Eigen::VectorXd SamplePerturbationGaussian(Eigen::Index d, double sigma,
                                           std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kShape, "perturbation dimension must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kParameter, "sigma must be finite and >= 0");
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  if (sigma == 0.0) return b;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Eigen::Index j = 0; j < d; ++j) b[j] = normal(rng);
  return b;
}

SphericalGammaDraw SampleSphericalGammaParts(Eigen::Index d, double epsilon,
                                             double epsilon_prime,
                                             std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kShape, "perturbation dimension must be >= 1");
  if (!(epsilon > 0.0) || !(epsilon_prime > 0.0)) {
    throw Error(ErrorCode::kParameter, "epsilon and epsilon_prime must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SphericalGammaDraw draw;
  draw.direction.resize(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index j = 0; j < d; ++j) draw.direction[j] = normal(rng);
    norm = draw.direction.norm();
  }
  draw.direction /= norm;
  std::gamma_distribution<double> gamma(static_cast<double>(d),
                                        epsilon_prime / epsilon);
  draw.radius = gamma(rng);
  return draw;
}

Eigen::VectorXd SamplePerturbationSphericalGamma(Eigen::Index d, double epsilon,
                                                 double epsilon_prime,
                                                 std::uint64_t seed) {
  SphericalGammaDraw draw = SampleSphericalGammaParts(d, epsilon, epsilon_prime, seed);
  return draw.direction * draw.radius;
}

}  // namespace certremove
