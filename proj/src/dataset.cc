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

#include "certremove/dataset.h"

#include <cmath>
#include <numeric>
#include <string>

#include "certremove/error.h"

namespace certremove {

Dataset MakeDataset(FeatureMatrix features, Eigen::VectorXd targets) {
  if (features.rows() < 1 || features.cols() < 1) {
    throw Error(ErrorCode::kShape, "dataset needs at least one row and column");
  }
  if (targets.size() != features.rows()) {
    throw Error(ErrorCode::kShape,
                "target count " + std::to_string(targets.size()) +
                    " does not match row count " +
                    std::to_string(features.rows()));
  }
  if (!features.allFinite() || !targets.allFinite()) {
    throw Error(ErrorCode::kParameter, "dataset contains NaN or Inf");
  }
  Dataset data;
  data.features = std::move(features);
  data.targets = std::move(targets);
  data.normalized = MaxRowNorm(data.features) <= 1.0;
  return data;
}

double MaxRowNorm(const FeatureMatrix& features) {
  if (features.rows() == 0) return 0.0;
  return features.rowwise().norm().maxCoeff();
}

Dataset NormalizeDataset(Dataset raw) {
  if (!raw.features.allFinite()) {
    throw Error(ErrorCode::kParameter, "cannot normalize NaN or Inf features");
  }
  const double max_norm = MaxRowNorm(raw.features);
  if (max_norm > 1.0) {
    const double scale = 1.0 / max_norm;
    raw.features *= scale;
    raw.scale_factor *= scale;
  }
  raw.normalized = true;
  return raw;
}

void CheckTargets(const Dataset& data, const ConvexLoss& loss) {
  for (RowIndex i = 0; i < data.rows(); ++i) {
    if (!IsValidTarget(loss, data.targets[i])) {
      throw Error(ErrorCode::kDomain,
                  "row " + std::to_string(i) + ": target " +
                      std::to_string(data.targets[i]) + " is invalid for the " +
                      std::string(LossKindName(loss.kind)) + " loss");
    }
  }
}

void CheckDimension(const Dataset& data, Eigen::Index size, const char* what) {
  if (size != data.dim()) {
    throw Error(ErrorCode::kShape, std::string(what) + " has length " +
                                       std::to_string(size) + ", expected " +
                                       std::to_string(data.dim()));
  }
}

std::vector<RowIndex> AllRows(const Dataset& data) {
  std::vector<RowIndex> rows(static_cast<size_t>(data.rows()));
  std::iota(rows.begin(), rows.end(), RowIndex{0});
  return rows;
}

Dataset SelectRows(const Dataset& data, RowSpan rows) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t k = 0; k < rows.size(); ++k) {
    const RowIndex i = rows[k];
    if (i < 0 || i >= data.rows()) {
      throw Error(ErrorCode::kStaleIndex,
                  "row " + std::to_string(i) + " is out of range");
    }
    out.features.row(static_cast<Eigen::Index>(k)) = data.features.row(i);
    out.targets[static_cast<Eigen::Index>(k)] = data.targets[i];
  }
  out.normalized = data.normalized;
  out.scale_factor = data.scale_factor;
  return out;
}

}  // namespace certremove
