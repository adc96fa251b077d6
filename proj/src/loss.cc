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

#include "certremove/loss.h"

#include <string>

#include "certremove/error.h"

namespace certremove {

std::string_view LossKindName(LossKind kind) {
  return kind == LossKind::kLogistic ? "logistic" : "least_squares";
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "least_squares" || name == "ls") return LossKind::kLeastSquares;
  throw Error(ErrorCode::kParameter,
              "unknown loss '" + std::string(name) + "'");
}

ConvexLoss ConvexLoss::Logistic() {
  return ConvexLoss{LossKind::kLogistic, 1.0, 0.25};
}

ConvexLoss ConvexLoss::LeastSquares(std::optional<double> grad_norm_bound) {
  return ConvexLoss{LossKind::kLeastSquares, grad_norm_bound, 0.0};
}

ConvexLoss ConvexLoss::FromKind(LossKind kind) {
  return kind == LossKind::kLogistic ? Logistic() : LeastSquares();
}

bool IsValidTarget(const ConvexLoss& loss, double y) {
  if (!std::isfinite(y)) return false;
  if (loss.kind == LossKind::kLogistic) return y == 1.0 || y == -1.0;
  return true;
}

namespace {

void CheckTarget(const ConvexLoss& loss, double y) {
  if (!IsValidTarget(loss, y)) {
    throw Error(ErrorCode::kDomain,
                "target " + std::to_string(y) + " is outside the domain of the " +
                    std::string(LossKindName(loss.kind)) + " loss");
  }
}

}  // namespace

double LossValue(const ConvexLoss& loss, double z, double y) {
  CheckTarget(loss, y);
  return detail::Value(loss.kind, z, y);
}

double LossFirstDeriv(const ConvexLoss& loss, double z, double y) {
  CheckTarget(loss, y);
  return detail::FirstDeriv(loss.kind, z, y);
}

double LossSecondDeriv(const ConvexLoss& loss, double z, double y) {
  CheckTarget(loss, y);
  return detail::SecondDeriv(loss.kind, z, y);
}

}  // namespace certremove
