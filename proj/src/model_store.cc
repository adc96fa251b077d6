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

#include "certremove/model_store.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "certremove/csv.h"
#include "certremove/error.h"

namespace certremove {
namespace {

using nlohmann::json;

json VectorJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd VectorFromJson(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

std::string_view SchemeName(BudgetScheme s) {
  return s == BudgetScheme::kGaussian ? "gaussian" : "spherical_gamma";
}

BudgetScheme SchemeFromName(const std::string& name) {
  if (name == "gaussian") return BudgetScheme::kGaussian;
  if (name == "spherical_gamma") return BudgetScheme::kSphericalGamma;
  throw Error(ErrorCode::kIngestion, "unknown ledger scheme '" + name + "'");
}

std::string_view NoiseName(NoiseScheme s) {
  return s == NoiseScheme::kGaussian ? "gaussian" : "spherical_gamma";
}

NoiseScheme NoiseFromName(const std::string& name) {
  if (name == "gaussian") return NoiseScheme::kGaussian;
  if (name == "spherical_gamma") return NoiseScheme::kSphericalGamma;
  throw Error(ErrorCode::kIngestion, "unknown noise scheme '" + name + "'");
}

PerturbedModel ModelFromJson(const json& j) {
  PerturbedModel m;
  m.weights = VectorFromJson(j.at("weights"));
  m.perturbation = VectorFromJson(j.at("perturbation_b"));
  const json& hp = j.at("hyperparams");
  m.lambda = hp.at("lambda").get<double>();
  m.sigma = hp.at("sigma").get<double>();
  m.epsilon = hp.at("epsilon").get<double>();
  m.delta = hp.at("delta").get<double>();
  m.loss_kind = ParseLossKind(hp.at("loss").get<std::string>());
  m.grad_tol = hp.at("grad_tol").get<double>();
  m.attained_grad_norm = hp.value("attained_grad_norm", 0.0);
  m.noise = NoiseFromName(hp.value("noise", std::string("gaussian")));
  m.seed = j.at("seed").get<std::uint64_t>();
  if (m.weights.size() != m.perturbation.size() || m.weights.size() == 0) {
    throw Error(ErrorCode::kIngestion, "weights and perturbation_b lengths differ");
  }
  return m;
}

RemovalState StateFromJson(const json& j, Eigen::Index d) {
  RemovalState s;
  const std::string mask = j.at("live_mask").get<std::string>();
  s.live_mask.reserve(mask.size());
  for (char c : mask) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kIngestion, "live_mask must contain only 0 and 1");
    }
    s.live_mask.push_back(c == '1' ? 1 : 0);
  }
  s.live_count = j.at("live_count").get<Eigen::Index>();
  Eigen::Index ones = 0;
  for (auto f : s.live_mask) ones += f;
  if (ones != s.live_count) {
    throw Error(ErrorCode::kIngestion, "live_count disagrees with live_mask");
  }
  const auto rows = j.at("gram_K").get<std::vector<std::vector<double>>>();
  if (static_cast<Eigen::Index>(rows.size()) != d) {
    throw Error(ErrorCode::kIngestion, "gram_K has the wrong dimension");
  }
  s.gram.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    if (static_cast<Eigen::Index>(rows[static_cast<size_t>(a)].size()) != d) {
      throw Error(ErrorCode::kIngestion, "gram_K is not square");
    }
    for (Eigen::Index b = 0; b < d; ++b) {
      s.gram(a, b) = rows[static_cast<size_t>(a)][static_cast<size_t>(b)];
    }
  }
  if (j.contains("removal_history")) {
    s.history = j.at("removal_history").get<std::vector<std::vector<RowIndex>>>();
  }
  return s;
}

template <typename F>
auto Guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIngestion, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json ToJson(const PerturbedModel& m) {
  return json{
      {"weights", VectorJson(m.weights)},
      {"perturbation_b", VectorJson(m.perturbation)},
      {"hyperparams",
       {{"lambda", m.lambda},
        {"sigma", m.sigma},
        {"epsilon", m.epsilon},
        {"delta", m.delta},
        {"loss", std::string(LossKindName(m.loss_kind))},
        {"grad_tol", m.grad_tol},
        {"attained_grad_norm", m.attained_grad_norm},
        {"noise", std::string(NoiseName(m.noise))}}},
      {"seed", m.seed},
  };
}

json ToJson(const BudgetLedger& ledger) {
  json entries = json::array();
  for (const LedgerEntry& e : ledger.entries()) {
    entries.push_back({{"timestamp_ms", e.timestamp_ms},
                       {"batch_size", e.batch_size},
                       {"increment", e.increment}});
  }
  return json{{"scheme", std::string(SchemeName(ledger.scheme()))},
              {"epsilon", ledger.epsilon()},
              {"delta", ledger.delta()},
              {"sigma", ledger.sigma()},
              {"c_value", ledger.c_value()},
              {"beta_accumulated", ledger.beta_accumulated()},
              {"beta_max", ledger.beta_max()},
              {"entries", std::move(entries)}};
}

json ToJson(const RemovalState& state) {
  std::string mask;
  mask.reserve(state.live_mask.size());
  for (auto f : state.live_mask) mask.push_back(f != 0 ? '1' : '0');
  json gram = json::array();
  for (Eigen::Index a = 0; a < state.gram.rows(); ++a) {
    gram.push_back(VectorJson(state.gram.row(a).transpose()));
  }
  return json{{"live_mask", std::move(mask)},
              {"gram_K", std::move(gram)},
              {"live_count", state.live_count},
              {"removal_history", state.history}};
}

json ToJson(const ModelFile& file) {
  json j = ToJson(file.model);
  j["schema_version"] = file.schema_version;
  j["ledger"] = ToJson(file.ledger);
  j["removal_state"] = ToJson(file.removal_state);
  j["dataset_fingerprint"] = file.dataset_fingerprint;
  if (!file.row_map.empty()) j["row_map"] = file.row_map;
  j["archive"] = file.archive;
  return j;
}

json ToJson(const MultiClassModelFile& file) {
  json classes = json::array();
  for (size_t k = 0; k < file.classes.size(); ++k) {
    json c = ToJson(file.classes[k]);
    c["label"] = file.labels[k];
    classes.push_back(std::move(c));
  }
  return json{{"schema_version", file.schema_version},
              {"multiclass", true},
              {"dataset_fingerprint", file.dataset_fingerprint},
              {"classes", std::move(classes)}};
}

BudgetLedger LedgerFromJson(const json& j) {
  return Guarded("ledger", [&] {
    std::vector<LedgerEntry> entries;
    for (const json& e : j.at("entries")) {
      entries.push_back(LedgerEntry{e.at("timestamp_ms").get<std::int64_t>(),
                                    e.at("batch_size").get<Eigen::Index>(),
                                    e.at("increment").get<double>()});
    }
    return BudgetLedger::Restore(
        SchemeFromName(j.at("scheme").get<std::string>()),
        j.at("epsilon").get<double>(), j.at("delta").get<double>(),
        j.at("sigma").get<double>(), j.at("c_value").get<double>(),
        j.at("beta_max").get<double>(), j.at("beta_accumulated").get<double>(),
        std::move(entries));
  });
}

ModelFile ModelFileFromJson(const json& j) {
  return Guarded("model file", [&] {
    ModelFile file;
    file.schema_version = j.at("schema_version").get<int>();
    if (file.schema_version != kModelSchemaVersion) {
      throw Error(ErrorCode::kIngestion, "unsupported schema_version " +
                                             std::to_string(file.schema_version));
    }
    file.model = ModelFromJson(j);
    file.ledger = LedgerFromJson(j.at("ledger"));
    file.removal_state = StateFromJson(j.at("removal_state"), file.model.weights.size());
    file.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    if (j.contains("row_map")) file.row_map = j.at("row_map").get<std::vector<RowIndex>>();
    if (!file.row_map.empty() &&
        file.row_map.size() != file.removal_state.live_mask.size()) {
      throw Error(ErrorCode::kIngestion, "row_map length disagrees with live_mask");
    }
    file.archive = j.value("archive", json::array());
    return file;
  });
}

bool IsMultiClassJson(const json& j) { return j.value("multiclass", false); }

MultiClassModelFile MultiClassFromJson(const json& j) {
  return Guarded("multiclass model file", [&] {
    MultiClassModelFile file;
    file.schema_version = j.at("schema_version").get<int>();
    file.dataset_fingerprint = j.at("dataset_fingerprint").get<std::string>();
    for (const json& c : j.at("classes")) {
      file.labels.push_back(c.at("label").get<double>());
      file.classes.push_back(ModelFileFromJson(c));
    }
    return file;
  });
}

json LoadJson(const std::string& path) {
  const std::string text = ReadFile(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIngestion, path + ": " + e.what());
  }
}

void SaveJsonAtomic(const std::string& path, const json& j) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << j.dump();
    out.flush();
    if (!out) {
      throw Error(ErrorCode::kIo, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot replace " + path);
  }
}

void CheckFingerprint(const std::string& expected, const std::string& actual) {
  if (expected != actual) {
    throw Error(ErrorCode::kFingerprint,
                "data file fingerprint " + actual +
                    " does not match the model's " + expected);
  }
}

}  // namespace certremove
