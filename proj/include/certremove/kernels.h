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

#ifndef CERTREMOVE_KERNELS_H_
#define CERTREMOVE_KERNELS_H_

#include <Eigen/Dense>

#include "certremove/dataset.h"
#include "certremove/loss.h"

// Data-parallel kernels over a selection of dataset rows.
//
// Every reduction is split into fixed blocks of kRowBlock rows (or fixed
// column tiles), each block is reduced by a single thread, and the block
// partials are combined serially in block order. Results are therefore
// bitwise identical for any OpenMP thread count.
//
// The serial reference versions in kernels_reference.h compute the same
// quantities with plain loops and are kept for tests and benchmarks.
namespace certremove::kernels {

inline constexpr Eigen::Index kRowBlock = 256;
inline constexpr Eigen::Index kGramTile = 64;

// z_k = <x_{rows[k]}, w>.
Eigen::VectorXd Margins(const FeatureMatrix& x, RowSpan rows,
                        const Eigen::VectorXd& w);

// sum_k coeffs[k] * x_{rows[k]}.
Eigen::VectorXd WeightedRowSum(const FeatureMatrix& x, RowSpan rows,
                               const Eigen::VectorXd& coeffs);

// sum_k weights[k] * x_{rows[k]} x_{rows[k]}'. Weights must be nonnegative.
Eigen::MatrixXd WeightedGramian(const FeatureMatrix& x, RowSpan rows,
                                const Eigen::VectorXd& weights);

// sum_k x_{rows[k]} x_{rows[k]}'.
Eigen::MatrixXd Gramian(const FeatureMatrix& x, RowSpan rows);

struct LossSums {
  double value = 0.0;        // sum_k l(z_k, y_k)
  Eigen::VectorXd gradient;  // sum_k l'(z_k, y_k) x_k
};

// One fused pass over the rows computing the data term of the objective and
// its gradient.
LossSums LossValueAndGradient(const Dataset& data, RowSpan rows,
                              const Eigen::VectorXd& w, LossKind kind);

// l''(z_k, y_k) for each selected row.
Eigen::VectorXd SecondDerivatives(const Dataset& data, RowSpan rows,
                                  const Eigen::VectorXd& w, LossKind kind);

// ||X_rows v||_2.
double ProjectedNorm(const FeatureMatrix& x, RowSpan rows,
                     const Eigen::VectorXd& v);

}  // namespace certremove::kernels

#endif  // CERTREMOVE_KERNELS_H_
