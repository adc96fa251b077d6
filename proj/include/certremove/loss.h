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

#ifndef CERTREMOVE_LOSS_H_
#define CERTREMOVE_LOSS_H_

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace certremove {

enum class LossKind { kLogistic, kLeastSquares };

std::string_view LossKindName(LossKind kind);
// Accepts "logistic", "least_squares" and the short form "ls".
LossKind ParseLossKind(std::string_view name);

// A convex, everywhere twice-differentiable per-sample loss l(z, y) of the
// linear score z = w'x. The per-sample gradient is l'(z, y) * x and the
// per-sample Hessian is l''(z, y) * x x'.
//
// grad_norm_bound is the uniform bound C on |l'(z, y)| * ||x|| used by the
// worst-case residual bound; it is unset for least squares, which has no
// finite value. hessian_lipschitz is the Lipschitz constant gamma of l''.
struct ConvexLoss {
  LossKind kind = LossKind::kLogistic;
  std::optional<double> grad_norm_bound;
  double hessian_lipschitz = 0.0;

  // C = 1 and gamma = 1/4, valid when every ||x|| <= 1.
  static ConvexLoss Logistic();
  // l(z, y) = (z - y)^2, with no 1/2 factor; gamma = 0.
  static ConvexLoss LeastSquares(std::optional<double> grad_norm_bound = {});
  static ConvexLoss FromKind(LossKind kind);
};

// Checked evaluation; throws Error(kDomain) for a logistic target not in
// {-1, +1}.
double LossValue(const ConvexLoss& loss, double z, double y);
double LossFirstDeriv(const ConvexLoss& loss, double z, double y);
double LossSecondDeriv(const ConvexLoss& loss, double z, double y);

// True when y is a legal target for the loss.
bool IsValidTarget(const ConvexLoss& loss, double y);

namespace detail {

// Unchecked primitives for the inner loops; the targets were validated once
// when the dataset was paired with the loss.

// sigma(t) = 1 / (1 + e^-t) without overflow for large |t|.
inline double Sigmoid(double t) {
  if (t >= 0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// -log sigma(t) = log(1 + e^-t).
inline double LogOnePlusExpNeg(double t) {
  if (t > 0) {
    return std::log1p(std::exp(-t));
  }
  return -t + std::log1p(std::exp(t));
}

inline double Value(LossKind kind, double z, double y) {
  if (kind == LossKind::kLogistic) {
    return LogOnePlusExpNeg(y * z);
  }
  const double r = z - y;
  return r * r;
}

inline double FirstDeriv(LossKind kind, double z, double y) {
  if (kind == LossKind::kLogistic) {
    // (sigma(yz) - 1) y == -sigma(-yz) y
    return -Sigmoid(-y * z) * y;
  }
  return 2.0 * (z - y);
}

inline double SecondDeriv(LossKind kind, double z, double y) {
  if (kind == LossKind::kLogistic) {
    const double t = y * z;
    return Sigmoid(t) * Sigmoid(-t);
  }
  return 2.0;
}

}  // namespace detail
}  // namespace certremove

#endif  // CERTREMOVE_LOSS_H_
