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

#include "certremove/kernels_reference.h"

#include <cmath>

#include "certremove/error.h"

namespace certremove::reference {

Eigen::VectorXd Margins(const FeatureMatrix& x, RowSpan rows,
                        const Eigen::VectorXd& w) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(rows.size()));
  for (size_t k = 0; k < rows.size(); ++k) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) acc += x(rows[k], j) * w[j];
    z[static_cast<Eigen::Index>(k)] = acc;
  }
  return z;
}

Eigen::VectorXd WeightedRowSum(const FeatureMatrix& x, RowSpan rows,
                               const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.cols());
  for (size_t k = 0; k < rows.size(); ++k) {
    const double c = coeffs[static_cast<Eigen::Index>(k)];
    for (Eigen::Index j = 0; j < x.cols(); ++j) out[j] += c * x(rows[k], j);
  }
  return out;
}

Eigen::MatrixXd WeightedGramian(const FeatureMatrix& x, RowSpan rows,
                                const Eigen::VectorXd& weights) {
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (size_t k = 0; k < rows.size(); ++k) {
    const double c = weights[static_cast<Eigen::Index>(k)];
    if (c < 0.0) {
      throw Error(ErrorCode::kParameter, "gramian weights must be nonnegative");
    }
    for (Eigen::Index a = 0; a < d; ++a) {
      const double ca = c * x(rows[k], a);
      for (Eigen::Index b = 0; b <= a; ++b) out(a, b) += ca * x(rows[k], b);
    }
  }
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) out(a, b) = out(b, a);
  }
  return out;
}

kernels::LossSums LossValueAndGradient(const Dataset& data, RowSpan rows,
                                       const Eigen::VectorXd& w, LossKind kind) {
  kernels::LossSums sums;
  const Eigen::VectorXd z = Margins(data.features, rows, w);
  Eigen::VectorXd coeffs(z.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double y = data.targets[rows[k]];
    sums.value += detail::Value(kind, z[kk], y);
    coeffs[kk] = detail::FirstDeriv(kind, z[kk], y);
  }
  sums.gradient = WeightedRowSum(data.features, rows, coeffs);
  return sums;
}

Eigen::VectorXd SecondDerivatives(const Dataset& data, RowSpan rows,
                                  const Eigen::VectorXd& w, LossKind kind) {
  const Eigen::VectorXd z = Margins(data.features, rows, w);
  Eigen::VectorXd out(z.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out[kk] = detail::SecondDeriv(kind, z[kk], data.targets[rows[k]]);
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

}  // namespace certremove::reference
