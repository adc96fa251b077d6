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

#include "certremove/kernels.h"

#include <cmath>
#include <utility>
#include <vector>

#include "certremove/error.h"

namespace certremove::kernels {
namespace {

Eigen::Index NumBlocks(Eigen::Index count) {
  return (count + kRowBlock - 1) / kRowBlock;
}

Eigen::Index Count(RowSpan rows) { return static_cast<Eigen::Index>(rows.size()); }

}  // namespace

Eigen::VectorXd Margins(const FeatureMatrix& x, RowSpan rows,
                        const Eigen::VectorXd& w) {
  const Eigen::Index m = Count(rows);
  Eigen::VectorXd z(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < m; ++k) {
    z[k] = x.row(rows[k]).dot(w.transpose());
  }
  return z;
}

Eigen::VectorXd WeightedRowSum(const FeatureMatrix& x, RowSpan rows,
                               const Eigen::VectorXd& coeffs) {
  const Eigen::Index m = Count(rows);
  const Eigen::Index blocks = NumBlocks(m);
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(x.cols(), blocks);
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index end = std::min(m, (b + 1) * kRowBlock);
    auto acc = partial.col(b);
    for (Eigen::Index k = b * kRowBlock; k < end; ++k) {
      acc.noalias() += coeffs[k] * x.row(rows[k]).transpose();
    }
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index b = 0; b < blocks; ++b) out += partial.col(b);
  return out;
}

Eigen::MatrixXd WeightedGramian(const FeatureMatrix& x, RowSpan rows,
                                const Eigen::VectorXd& weights) {
  const Eigen::Index m = Count(rows);
  const Eigen::Index d = x.cols();
  if (weights.size() != m) {
    throw Error(ErrorCode::kShape, "gramian weight count mismatch");
  }
  if ((weights.array() < 0.0).any()) {
    throw Error(ErrorCode::kParameter, "gramian weights must be nonnegative");
  }

  // Z = diag(sqrt(weights)) X_rows, column-major so that column tiles are
  // contiguous operands for the tile products. Rows are gathered in small
  // chunks so each column write stays sequential.
  constexpr Eigen::Index kChunk = 16;
  Eigen::MatrixXd z(m, d);
#pragma omp parallel for schedule(static)
  for (Eigen::Index k0 = 0; k0 < m; k0 += kChunk) {
    const Eigen::Index kb = std::min(kChunk, m - k0);
    double scale[kChunk];
    for (Eigen::Index k = 0; k < kb; ++k) scale[k] = std::sqrt(weights[k0 + k]);
    for (Eigen::Index j = 0; j < d; ++j) {
      double* col = z.data() + j * m + k0;
      for (Eigen::Index k = 0; k < kb; ++k) col[k] = scale[k] * x(rows[k0 + k], j);
    }
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> tiles;
  for (Eigen::Index i = 0; i < d; i += kGramTile) {
    for (Eigen::Index j = 0; j <= i; j += kGramTile) tiles.emplace_back(i, j);
  }

  Eigen::MatrixXd lower(d, d);
  const auto num_tiles = static_cast<Eigen::Index>(tiles.size());
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index t = 0; t < num_tiles; ++t) {
    const auto [i0, j0] = tiles[static_cast<size_t>(t)];
    const Eigen::Index wi = std::min(kGramTile, d - i0);
    const Eigen::Index wj = std::min(kGramTile, d - j0);
    lower.block(i0, j0, wi, wj).noalias() =
        z.middleCols(i0, wi).transpose() * z.middleCols(j0, wj);
  }
  return lower.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd Gramian(const FeatureMatrix& x, RowSpan rows) {
  return WeightedGramian(x, rows, Eigen::VectorXd::Ones(Count(rows)));
}

LossSums LossValueAndGradient(const Dataset& data, RowSpan rows,
                              const Eigen::VectorXd& w, LossKind kind) {
  const Eigen::Index m = Count(rows);
  const Eigen::Index blocks = NumBlocks(m);
  const FeatureMatrix& x = data.features;
  Eigen::MatrixXd partial_grad = Eigen::MatrixXd::Zero(x.cols(), blocks);
  Eigen::VectorXd partial_value = Eigen::VectorXd::Zero(blocks);
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index end = std::min(m, (b + 1) * kRowBlock);
    auto grad = partial_grad.col(b);
    double value = 0.0;
    for (Eigen::Index k = b * kRowBlock; k < end; ++k) {
      const RowIndex i = rows[k];
      const double zi = x.row(i).dot(w.transpose());
      const double yi = data.targets[i];
      value += detail::Value(kind, zi, yi);
      grad.noalias() += detail::FirstDeriv(kind, zi, yi) * x.row(i).transpose();
    }
    partial_value[b] = value;
  }
  LossSums sums;
  sums.gradient = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index b = 0; b < blocks; ++b) {
    sums.value += partial_value[b];
    sums.gradient += partial_grad.col(b);
  }
  return sums;
}

Eigen::VectorXd SecondDerivatives(const Dataset& data, RowSpan rows,
                                  const Eigen::VectorXd& w, LossKind kind) {
  const Eigen::Index m = Count(rows);
  Eigen::VectorXd out(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < m; ++k) {
    const RowIndex i = rows[k];
    out[k] = detail::SecondDeriv(kind, data.features.row(i).dot(w.transpose()),
                                 data.targets[i]);
  }
  return out;
}

double ProjectedNorm(const FeatureMatrix& x, RowSpan rows,
                     const Eigen::VectorXd& v) {
  const Eigen::VectorXd z = Margins(x, rows, v);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) sum += z[k] * z[k];
  return std::sqrt(sum);
}

}  // namespace certremove::kernels
