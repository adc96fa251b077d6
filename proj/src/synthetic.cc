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

#include "certremove/synthetic.h"

#include <algorithm>
#include <random>

namespace certremove::synthetic {
namespace {

Eigen::VectorXd GaussianVector(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (Eigen::Index j = 0; j < d; ++j) v[j] = normal(rng);
  return v;
}

}  // namespace

Dataset LogisticTask(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                     double flip_rate) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  const Eigen::VectorXd w_true = GaussianVector(d, rng);
  FeatureMatrix x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.row(i) = GaussianVector(d, rng).transpose();
    y[i] = x.row(i).dot(w_true.transpose()) >= 0.0 ? 1.0 : -1.0;
    if (unif(rng) < flip_rate) y[i] = -y[i];
  }
  return NormalizeDataset(MakeDataset(std::move(x), std::move(y)));
}

Dataset RidgeTask(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                  double noise) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd w_true = GaussianVector(d, rng);
  FeatureMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = GaussianVector(d, rng).transpose();
  Dataset data = NormalizeDataset(MakeDataset(std::move(x), Eigen::VectorXd::Zero(n)));
  for (Eigen::Index i = 0; i < n; ++i) {
    data.targets[i] = data.features.row(i).dot(w_true.transpose()) + noise * normal(rng);
  }
  return data;
}

Dataset PixelTask(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  std::normal_distribution<double> normal;
  Eigen::VectorXd proto[2];
  for (auto& p : proto) {
    p.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) p[j] = unif(rng) < 0.3 ? unif(rng) : 0.0;
  }
  FeatureMatrix x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = unif(rng) < 0.5 ? 0 : 1;
    y[i] = c == 0 ? -1.0 : 1.0;
    // A per-sample stroke intensity, a blend toward the other class so the
    // classes overlap, and independent pixel noise.
    const double intensity = 0.6 + 0.4 * unif(rng);
    const double blend = 0.5 * unif(rng) * unif(rng);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mean = (1.0 - blend) * proto[c][j] + blend * proto[1 - c][j];
      const double v = intensity * mean + 0.6 * normal(rng);
      x(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return NormalizeDataset(MakeDataset(std::move(x), std::move(y)));
}

SplitTask AnisotropicTask(Eigen::Index n_train, Eigen::Index n_test,
                          Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  auto draw = [&](Eigen::Index n) {
    FeatureMatrix x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = unif(rng) < 0.5 ? -1.0 : 1.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double spread = (j % 2 == 0) ? 3.0 : 0.3;
        x(i, j) = 0.15 * y[i] + spread * normal(rng);
      }
    }
    return MakeDataset(std::move(x), std::move(y));
  };
  SplitTask task;
  task.train = draw(n_train);
  task.test = draw(n_test);
  const double max_norm = std::max(MaxRowNorm(task.train.features),
                                   MaxRowNorm(task.test.features));
  if (max_norm > 1.0) {
    for (Dataset* ds : {&task.train, &task.test}) {
      ds->features /= max_norm;
      ds->scale_factor = 1.0 / max_norm;
    }
  }
  task.train.normalized = task.test.normalized = true;
  return task;
}

Dataset MultiClassTask(Eigen::Index n, Eigen::Index d, int k,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<Eigen::VectorXd> centers;
  for (int c = 0; c < k; ++c) centers.push_back(2.0 * GaussianVector(d, rng));
  FeatureMatrix x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = pick(rng);
    y[i] = c;
    x.row(i) = (centers[static_cast<size_t>(c)] + GaussianVector(d, rng)).transpose();
  }
  return NormalizeDataset(MakeDataset(std::move(x), std::move(y)));
}

}  // namespace certremove::synthetic
