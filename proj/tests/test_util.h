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

#ifndef CERTREMOVE_TESTS_TEST_UTIL_H_
#define CERTREMOVE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "certremove/dataset.h"
#include "certremove/loss.h"

namespace certremove::testing {

// Seeded value generator for property tests. Every property test draws its
// cases from one of these so failures reproduce from the printed seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double Normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  Eigen::Index Int(Eigen::Index lo, Eigen::Index hi) {  // inclusive
    return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng_);
  }
  double Sign() { return Int(0, 1) == 0 ? -1.0 : 1.0; }

  Eigen::VectorXd Vector(Eigen::Index d, double scale = 1.0) {
    Eigen::VectorXd v(d);
    for (Eigen::Index j = 0; j < d; ++j) v[j] = scale * Normal();
    return v;
  }

  // Gaussian rows scaled into the unit ball, logistic labels from a planted
  // direction with some noise, or real targets for least squares.
  Dataset RandomDataset(Eigen::Index n, Eigen::Index d, LossKind kind) {
    FeatureMatrix x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = Normal();
    }
    const Eigen::VectorXd w = Vector(d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = x.row(i).dot(w.transpose()) + 0.5 * Normal();
      y[i] = kind == LossKind::kLogistic ? (z >= 0.0 ? 1.0 : -1.0) : z;
    }
    return NormalizeDataset(MakeDataset(std::move(x), std::move(y)));
  }

  // m distinct indices from [0, n).
  std::vector<RowIndex> Distinct(Eigen::Index n, Eigen::Index m) {
    std::vector<RowIndex> all(static_cast<size_t>(n));
    std::iota(all.begin(), all.end(), RowIndex{0});
    std::shuffle(all.begin(), all.end(), rng_);
    all.resize(static_cast<size_t>(m));
    return all;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<RowIndex> Without(Eigen::Index n, const std::vector<RowIndex>& removed) {
  std::vector<RowIndex> out;
  for (RowIndex i = 0; i < n; ++i) {
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) out.push_back(i);
  }
  return out;
}

}  // namespace certremove::testing

#endif  // CERTREMOVE_TESTS_TEST_UTIL_H_
