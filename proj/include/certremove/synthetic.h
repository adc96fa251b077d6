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

#ifndef CERTREMOVE_SYNTHETIC_H_
#define CERTREMOVE_SYNTHETIC_H_

#include <cstdint>

#include "certremove/dataset.h"

// Seeded synthetic problems for tests, benchmarks and desk-scale sweeps. All
// generators return normalized datasets unless noted.
namespace certremove::synthetic {

// Gaussian features, labels sign(w_true'x + noise) in {-1, +1}, with roughly
// `flip_rate` of the labels flipped.
Dataset LogisticTask(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                     double flip_rate = 0.1);

// Gaussian features, y = w_true'x + N(0, noise^2).
Dataset RidgeTask(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                  double noise = 0.1);

// Nonnegative "pixel" features in [0, 1]: two class prototypes with blurred
// per-sample noise, labels in {-1, +1}. Mimics a two-digit image task.
Dataset PixelTask(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

// Two Gaussian classes whose mean difference is spread over every coordinate
// but whose noise is large on half the coordinates. The class-mean direction
// (what heavy L2 regularization converges to) is a poor classifier there,
// while the discriminant direction is good. Train and test come from the same
// draw; both are normalized by the training set's scale.
struct SplitTask {
  Dataset train;
  Dataset test;
};
SplitTask AnisotropicTask(Eigen::Index n_train, Eigen::Index n_test,
                          Eigen::Index d, std::uint64_t seed);

// k Gaussian clusters with integer labels 0..k-1.
Dataset MultiClassTask(Eigen::Index n, Eigen::Index d, int k,
                       std::uint64_t seed);

}  // namespace certremove::synthetic

#endif  // CERTREMOVE_SYNTHETIC_H_
