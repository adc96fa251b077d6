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

#ifndef CERTREMOVE_PERTURBATION_H_
#define CERTREMOVE_PERTURBATION_H_

#include <cstdint>

#include <Eigen/Dense>

namespace certremove {

// Draws b ~ N(0, sigma^2 I_d) from a mt19937_64 stream seeded with `seed`.
// sigma = 0 yields the zero vector. Reproducible for a fixed standard library.
Eigen::VectorXd SamplePerturbationGaussian(Eigen::Index d, double sigma,
                                           std::uint64_t seed);

// The two factors of a draw from the density proportional to
// exp(-(epsilon / epsilon_prime) * ||b||).
struct SphericalGammaDraw {
  Eigen::VectorXd direction;  // uniform on the unit sphere
  double radius = 0.0;        // Gamma(shape = d, scale = epsilon_prime / epsilon)
};

SphericalGammaDraw SampleSphericalGammaParts(Eigen::Index d, double epsilon,
                                             double epsilon_prime,
                                             std::uint64_t seed);

// direction * radius of the draw above.
Eigen::VectorXd SamplePerturbationSphericalGamma(Eigen::Index d, double epsilon,
                                                 double epsilon_prime,
                                                 std::uint64_t seed);

}  // namespace certremove

#endif  // CERTREMOVE_PERTURBATION_H_
