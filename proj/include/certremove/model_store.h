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

#ifndef CERTREMOVE_MODEL_STORE_H_
#define CERTREMOVE_MODEL_STORE_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "certremove/budget.h"
#include "certremove/removal.h"
#include "certremove/trainer.h"

namespace certremove {

inline constexpr int kModelSchemaVersion = 1;

// Everything persisted for one removal-enabled binary model.
struct ModelFile {
  int schema_version = kModelSchemaVersion;
  PerturbedModel model;
  BudgetLedger ledger;
  RemovalState removal_state;
  std::string dataset_fingerprint;
  // Maps the model's local rows to rows of the data file. Empty means the
  // identity (the model was trained on every row).
  std::vector<RowIndex> row_map;
  // One entry per earlier training cycle: its ledger, seed and removals.
  nlohmann::json archive = nlohmann::json::array();
};

// One-vs-all bundle: one ModelFile per class, sharing the data fingerprint.
struct MultiClassModelFile {
  int schema_version = kModelSchemaVersion;
  std::string dataset_fingerprint;
  std::vector<double> labels;
  std::vector<ModelFile> classes;
};

nlohmann::json ToJson(const PerturbedModel& model);
nlohmann::json ToJson(const BudgetLedger& ledger);
nlohmann::json ToJson(const RemovalState& state);
nlohmann::json ToJson(const ModelFile& file);
nlohmann::json ToJson(const MultiClassModelFile& file);

BudgetLedger LedgerFromJson(const nlohmann::json& j);
ModelFile ModelFileFromJson(const nlohmann::json& j);
MultiClassModelFile MultiClassFromJson(const nlohmann::json& j);

bool IsMultiClassJson(const nlohmann::json& j);

nlohmann::json LoadJson(const std::string& path);

// Writes to a temporary file in the same directory, then renames over
// `path`, so readers never observe a partially written model.
void SaveJsonAtomic(const std::string& path, const nlohmann::json& j);

// Throws Error(kFingerprint) unless `actual` equals `expected`.
void CheckFingerprint(const std::string& expected, const std::string& actual);

}  // namespace certremove

#endif  // CERTREMOVE_MODEL_STORE_H_
