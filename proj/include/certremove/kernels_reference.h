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

#ifndef CERTREMOVE_KERNELS_REFERENCE_H_
#define CERTREMOVE_KERNELS_REFERENCE_H_

#include <Eigen/Dense>

#include "certremove/dataset.h"
#include "certremove/kernels.h"
#include "certremove/loss.h"

// Serial, loop-for-loop versions of the kernels in kernels.h. Same contracts;
// summation order is plain row order.
namespace certremove::reference {

Eigen::VectorXd Margins(const FeatureMatrix& x, RowSpan rows,
                        const Eigen::VectorXd& w);
Eigen::VectorXd WeightedRowSum(const FeatureMatrix& x, RowSpan rows,
                               const Eigen::VectorXd& coeffs);
Eigen::MatrixXd WeightedGramian(const FeatureMatrix& x, RowSpan rows,
                                const Eigen::VectorXd& weights);
kernels::LossSums LossValueAndGradient(const Dataset& data, RowSpan rows,
                                       const Eigen::VectorXd& w, LossKind kind);
Eigen::VectorXd SecondDerivatives(const Dataset& data, RowSpan rows,
                                  const Eigen::VectorXd& w, LossKind kind);
double ProjectedNorm(const FeatureMatrix& x, RowSpan rows,
                     const Eigen::VectorXd& v);

}  // namespace certremove::reference

#endif  // CERTREMOVE_KERNELS_REFERENCE_H_
