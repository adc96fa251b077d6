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

#ifndef CERTREMOVE_DATASET_H_
#define CERTREMOVE_DATASET_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "certremove/loss.h"

namespace certremove {

// Rows are samples; row-major keeps each x_i contiguous for the per-sample
// kernels.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowIndex = Eigen::Index;
using RowSpan = std::span<const RowIndex>;

// Training data: n rows x_i in R^d with targets y_i.
struct Dataset {
  FeatureMatrix features;
  Eigen::VectorXd targets;
  // Set once every row satisfies ||x_i|| <= 1.
  bool normalized = false;
  // Factor the raw rows were multiplied by during normalization.
  double scale_factor = 1.0;

  RowIndex rows() const { return features.rows(); }
  RowIndex dim() const { return features.cols(); }
};

// Validates n >= 1, d >= 1, matching target length and finiteness.
Dataset MakeDataset(FeatureMatrix features, Eigen::VectorXd targets);

// Scales every row by 1 / max_i ||x_i|| when that maximum exceeds 1. An
// all-zero matrix is returned unchanged. Targets are untouched.
Dataset NormalizeDataset(Dataset raw);

double MaxRowNorm(const FeatureMatrix& features);

// Throws Error(kDomain) naming the first row whose target the loss rejects.
void CheckTargets(const Dataset& data, const ConvexLoss& loss);

// Throws Error(kShape) unless w has the dataset's dimension.
void CheckDimension(const Dataset& data, Eigen::Index size, const char* what);

std::vector<RowIndex> AllRows(const Dataset& data);

// Copies the given rows, in order, into a new dataset.
Dataset SelectRows(const Dataset& data, RowSpan rows);

}  // namespace certremove

#endif  // CERTREMOVE_DATASET_H_
