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

#include "certremove/commands.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "CLI11.hpp"

#include "certremove/budget.h"
#include "certremove/csv.h"
#include "certremove/model_store.h"
#include "certremove/perturbation.h"
#include "certremove/removal.h"
#include "certremove/trainer.h"

namespace certremove::cli {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::int64_t WallMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

TargetKind TargetKindFor(LossKind kind) {
  return kind == LossKind::kLogistic ? TargetKind::kBinary : TargetKind::kReal;
}

Dataset LoadData(const std::string& path, TargetKind kind, std::ostream& err) {
  IngestResult ingest = IngestCsv(path, kind);
  for (const std::string& w : ingest.warnings) err << "warning: " << w << "\n";
  return std::move(ingest.data);
}

BudgetLedger LedgerFor(const PerturbedModel& model) {
  return model.sigma > 0.0 ? BudgetLedger::Make(model.epsilon, model.delta, model.sigma)
                           : BudgetLedger::MakeNoiseless(model.epsilon, model.delta);
}

// The binary problem of one one-vs-all class: the mapped rows, with targets
// +1 for `label` and -1 otherwise.
Dataset ClassSubset(const Dataset& data, const std::vector<RowIndex>& row_map,
                    double label) {
  Dataset subset = SelectRows(data, row_map);
  for (Eigen::Index k = 0; k < subset.rows(); ++k) {
    subset.targets[k] = subset.targets[k] == label ? 1.0 : -1.0;
  }
  return subset;
}

void CheckShape(const ModelFile& file, const Dataset& data) {
  if (static_cast<Eigen::Index>(file.removal_state.live_mask.size()) != data.rows() ||
      file.model.weights.size() != data.dim()) {
    throw Error(ErrorCode::kShape, "model and data file shapes disagree");
  }
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string JoinIndices(const std::vector<RowIndex>& idx) {
  std::string s;
  for (size_t k = 0; k < idx.size(); ++k) {
    if (k > 0) s += ",";
    s += std::to_string(idx[k]);
  }
  return s;
}

std::vector<std::vector<RowIndex>> SplitBatches(const std::vector<RowIndex>& all,
                                                std::int64_t batch_size) {
  if (batch_size < 0) {
    throw Error(ErrorCode::kParameter, "batch size must be >= 0");
  }
  std::vector<std::vector<RowIndex>> batches;
  const size_t step = batch_size == 0 ? all.size() : static_cast<size_t>(batch_size);
  for (size_t k = 0; k < all.size(); k += step) {
    batches.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(k),
                         all.begin() + static_cast<std::ptrdiff_t>(std::min(all.size(), k + step)));
  }
  return batches;
}

void CheckUniqueInRange(const std::vector<RowIndex>& all, Eigen::Index n) {
  if (all.empty()) throw Error(ErrorCode::kStaleIndex, "no indices given");
  std::unordered_set<RowIndex> seen;
  for (RowIndex i : all) {
    if (i < 0 || i >= n) {
      throw Error(ErrorCode::kStaleIndex, "row " + std::to_string(i) + " is out of range");
    }
    if (!seen.insert(i).second) {
      throw Error(ErrorCode::kStaleIndex, "row " + std::to_string(i) + " is listed twice");
    }
  }
}

std::set<std::uint64_t> UsedSeeds(const ModelFile& file) {
  std::set<std::uint64_t> seeds{file.model.seed};
  for (const json& a : file.archive) seeds.insert(a.at("seed").get<std::uint64_t>());
  return seeds;
}

// Retrains one model on its live rows with a fresh b; archives the old cycle.
double RetrainModelFile(ModelFile& file, const Dataset& data, std::uint64_t seed,
                        std::optional<double> tol) {
  if (UsedSeeds(file).count(seed) != 0) {
    throw Error(ErrorCode::kParameter,
                "seed " + std::to_string(seed) + " was already used by this model; "
                "retraining needs a fresh seed");
  }
  const ConvexLoss loss = ConvexLoss::FromKind(file.model.loss_kind);
  const std::vector<RowIndex> live = file.removal_state.LiveRows();
  const double grad_tol =
      tol.value_or(DefaultGradTol(static_cast<Eigen::Index>(live.size())));
  const Eigen::VectorXd b = SamplePerturbationGaussian(data.dim(), file.model.sigma, seed);

  const auto start = Clock::now();
  PerturbedModel fresh = TrainWithPerturbation(data, live, loss, file.model.lambda, b, grad_tol);
  RemovalState state = RemovalState::ForLiveMask(data, file.removal_state.live_mask);
  const double ms = MillisSince(start);

  file.archive.push_back(json{{"seed", file.model.seed},
                              {"retired_at_ms", WallMillis()},
                              {"ledger", ToJson(file.ledger)},
                              {"removal_history", file.removal_state.history}});
  fresh.noise = NoiseScheme::kGaussian;
  fresh.sigma = file.model.sigma;
  fresh.epsilon = file.model.epsilon;
  fresh.delta = file.model.delta;
  fresh.seed = seed;
  file.model = std::move(fresh);
  file.removal_state = std::move(state);
  file.ledger = LedgerFor(file.model);
  return ms;
}

TrainSummary TrainMultiClass(const TrainArgs& args, const Dataset& data,
                             const std::string& fingerprint, std::ostream& out) {
  const ConvexLoss loss = ConvexLoss::FromKind(ParseLossKind(args.loss));
  std::set<double> label_set(data.targets.data(), data.targets.data() + data.rows());
  if (label_set.size() < 2) {
    throw Error(ErrorCode::kIngestion, "one-vs-all needs at least two classes");
  }
  MultiClassModelFile bundle;
  bundle.dataset_fingerprint = fingerprint;
  TrainSummary summary;
  summary.models = static_cast<int>(label_set.size());
  int k = 0;
  for (double label : label_set) {
    std::vector<RowIndex> positives;
    std::vector<RowIndex> negatives;
    for (RowIndex i = 0; i < data.rows(); ++i) {
      (data.targets[i] == label ? positives : negatives).push_back(i);
    }
    // Balance the classes by subsampling negatives.
    std::mt19937_64 rng(args.seed + static_cast<std::uint64_t>(k));
    std::shuffle(negatives.begin(), negatives.end(), rng);
    negatives.resize(std::min(negatives.size(), positives.size()));
    std::vector<RowIndex> row_map = positives;
    row_map.insert(row_map.end(), negatives.begin(), negatives.end());
    std::sort(row_map.begin(), row_map.end());

    const Dataset subset = ClassSubset(data, row_map, label);
    const double tol = args.tol.value_or(DefaultGradTol(subset.rows()));
    const auto start = Clock::now();
    ModelFile file;
    file.model = Train(subset, loss, args.lambda, args.sigma, args.epsilon, args.delta,
                       args.seed + static_cast<std::uint64_t>(k), tol);
    file.removal_state = RemovalState::ForDataset(subset);
    summary.train_ms += MillisSince(start);
    file.ledger = LedgerFor(file.model);
    file.dataset_fingerprint = fingerprint;
    file.row_map = std::move(row_map);
    if (k == 0) summary.beta_max = file.ledger.beta_max();
    out << "class " << label << ": rows=" << subset.rows()
        << " beta_max=" << FormatDouble(file.ledger.beta_max()) << "\n";
    bundle.labels.push_back(label);
    bundle.classes.push_back(std::move(file));
    ++k;
  }

  Eigen::Index correct = 0;
  for (RowIndex i = 0; i < data.rows(); ++i) {
    size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < bundle.classes.size(); ++c) {
      const double score = data.features.row(i).dot(bundle.classes[c].model.weights.transpose());
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    correct += bundle.labels[best] == data.targets[i] ? 1 : 0;
  }
  summary.train_accuracy = static_cast<double>(correct) / static_cast<double>(data.rows());
  SaveJsonAtomic(args.out_path, ToJson(bundle));
  return summary;
}

RemoveSummary RemoveMultiClass(const RemoveArgs& args, MultiClassModelFile bundle,
                               std::ostream& out, std::ostream& err) {
  const Dataset data = LoadData(args.data_path, TargetKind::kClassLabel, err);
  const std::vector<RowIndex> all = ParseIndices(args.indices);
  CheckUniqueInRange(all, data.rows());

  struct ClassView {
    Dataset subset;
    std::vector<RowIndex> local_of;  // -1 when the row is not in this class model
    ConvexLoss loss;
  };
  std::vector<ClassView> views;
  for (size_t c = 0; c < bundle.classes.size(); ++c) {
    const ModelFile& file = bundle.classes[c];
    ClassView v;
    v.subset = ClassSubset(data, file.row_map, bundle.labels[c]);
    v.local_of.assign(static_cast<size_t>(data.rows()), -1);
    for (size_t k = 0; k < file.row_map.size(); ++k) {
      v.local_of[static_cast<size_t>(file.row_map[k])] = static_cast<RowIndex>(k);
    }
    v.loss = ConvexLoss::FromKind(file.model.loss_kind);
    views.push_back(std::move(v));
  }
  // A row is stale if some class model used it and every such model has
  // already removed it.
  for (RowIndex i : all) {
    bool used = false;
    bool live = false;
    for (size_t c = 0; c < views.size(); ++c) {
      const RowIndex local = views[c].local_of[static_cast<size_t>(i)];
      if (local < 0) continue;
      used = true;
      live = live || bundle.classes[c].removal_state.IsLive(local);
    }
    if (used && !live) {
      throw Error(ErrorCode::kStaleIndex, "row " + std::to_string(i) + " was already removed");
    }
    if (!used) err << "note: row " << i << " was not used by any class model\n";
  }

  RemoveSummary summary;
  const auto batches = SplitBatches(all, args.batch_size);
  for (size_t bi = 0; bi < batches.size(); ++bi) {
    std::vector<std::pair<size_t, RemovalPlan>> plans;
    std::vector<double> rejected;
    for (size_t c = 0; c < views.size(); ++c) {
      std::vector<RowIndex> local;
      for (RowIndex i : batches[bi]) {
        const RowIndex l = views[c].local_of[static_cast<size_t>(i)];
        if (l >= 0 && bundle.classes[c].removal_state.IsLive(l)) local.push_back(l);
      }
      if (local.empty()) continue;
      const auto start = Clock::now();
      RemovalPlan plan = PlanRemoval(bundle.classes[c].model, bundle.classes[c].removal_state,
                                     local, views[c].subset, views[c].loss);
      summary.removal_ms += MillisSince(start);
      if (!bundle.classes[c].ledger.WouldAccept(plan.increment)) {
        rejected.push_back(bundle.labels[c]);
      }
      plans.emplace_back(c, std::move(plan));
    }
    if (!rejected.empty()) {
      for (size_t r = bi; r < batches.size(); ++r) {
        summary.remaining.insert(summary.remaining.end(), batches[r].begin(), batches[r].end());
      }
      out << "retrain required: batch " << bi + 1 << " exceeds the budget of class(es)";
      for (double l : rejected) out << " " << l;
      out << "\nremaining indices: " << JoinIndices(summary.remaining) << "\n";
      summary.exit_code = kExitRetrainRequired;
      break;
    }
    for (auto& [c, plan] : plans) {
      ModelFile& file = bundle.classes[c];
      const double inc = plan.increment;
      file.ledger.TryCharge(inc, static_cast<Eigen::Index>(plan.batch.size()));
      CommitRemoval(file.model, file.removal_state, std::move(plan));
      summary.increments.push_back(inc);
      out << "batch " << bi + 1 << " class " << bundle.labels[c]
          << ": increment=" << FormatDouble(inc)
          << " beta=" << FormatDouble(file.ledger.beta_accumulated()) << "/"
          << FormatDouble(file.ledger.beta_max()) << "\n";
    }
    ++summary.batches_applied;
  }
  if (summary.batches_applied > 0) SaveJsonAtomic(args.model_path, ToJson(bundle));
  return summary;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumeric:
    case ErrorCode::kConvergence:
      return kExitNumericError;
    default:
      return kExitInputError;
  }
}

double SignAccuracy(const Eigen::VectorXd& w, const Dataset& data) {
  CheckDimension(data, w.size(), "weight vector");
  const Eigen::VectorXd z = data.features * w;
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    correct += ((z[i] >= 0.0) == (data.targets[i] >= 0.0)) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

std::vector<RowIndex> ParseIndices(const std::string& spec) {
  std::string text = spec;
  std::error_code ec;
  if (!spec.empty() && std::filesystem::is_regular_file(spec, ec)) text = ReadFile(spec);
  std::vector<RowIndex> out;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ',' || std::isspace(static_cast<unsigned char>(text[pos])))) {
      ++pos;
    }
    if (pos >= text.size()) break;
    size_t end = pos;
    while (end < text.size() && text[end] != ',' &&
           !std::isspace(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    long long value = 0;
    auto [ptr, perr] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (perr != std::errc() || ptr != text.data() + end) {
      throw Error(ErrorCode::kParameter,
                  "bad index '" + text.substr(pos, end - pos) + "'");
    }
    out.push_back(static_cast<RowIndex>(value));
    pos = end;
  }
  return out;
}

TrainSummary CmdTrain(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  const auto total_start = Clock::now();
  if (args.out_path.empty()) throw Error(ErrorCode::kParameter, "--out is required");
  const ConvexLoss loss = ConvexLoss::FromKind(ParseLossKind(args.loss));
  const std::string fingerprint = FileFingerprint(args.data_path);
  const Dataset data = LoadData(
      args.data_path, args.multiclass ? TargetKind::kClassLabel : TargetKindFor(loss.kind), err);
  if (args.sigma == 0.0) {
    err << "warning: sigma = 0, no objective perturbation; the certified-removal "
           "guarantee is vacuous (only zero-residual least-squares removals are accepted)\n";
  }
  if (args.multiclass) {
    TrainSummary summary = TrainMultiClass(args, data, fingerprint, out);
    summary.total_ms = MillisSince(total_start);
    out << "trained " << summary.models << " one-vs-all models: train_accuracy="
        << summary.train_accuracy << " train_ms=" << summary.train_ms << "\n";
    return summary;
  }

  const double tol = args.tol.value_or(DefaultGradTol(data.rows()));
  TrainSummary summary;
  const auto start = Clock::now();
  ModelFile file;
  file.model = Train(data, loss, args.lambda, args.sigma, args.epsilon, args.delta,
                     args.seed, tol);
  file.removal_state = RemovalState::ForDataset(data);
  summary.train_ms = MillisSince(start);
  file.ledger = LedgerFor(file.model);
  file.dataset_fingerprint = fingerprint;
  SaveJsonAtomic(args.out_path, ToJson(file));

  summary.train_accuracy = SignAccuracy(file.model.weights, data);
  summary.beta_max = file.ledger.beta_max();
  summary.total_ms = MillisSince(total_start);
  out << "trained: n=" << data.rows() << " d=" << data.dim()
      << " train_accuracy=" << summary.train_accuracy
      << " grad_norm=" << FormatDouble(file.model.attained_grad_norm)
      << " c=" << FormatDouble(file.ledger.c_value())
      << " beta_max=" << FormatDouble(summary.beta_max)
      << " train_ms=" << summary.train_ms << " total_ms=" << summary.total_ms << "\n";
  return summary;
}

RemoveSummary CmdRemove(const RemoveArgs& args, std::ostream& out, std::ostream& err) {
  const auto total_start = Clock::now();
  const json j = LoadJson(args.model_path);
  const std::string fingerprint = FileFingerprint(args.data_path);
  if (IsMultiClassJson(j)) {
    MultiClassModelFile bundle = MultiClassFromJson(j);
    CheckFingerprint(bundle.dataset_fingerprint, fingerprint);
    RemoveSummary summary = RemoveMultiClass(args, std::move(bundle), out, err);
    summary.total_ms = MillisSince(total_start);
    return summary;
  }
  ModelFile file = ModelFileFromJson(j);
  CheckFingerprint(file.dataset_fingerprint, fingerprint);
  const ConvexLoss loss = ConvexLoss::FromKind(file.model.loss_kind);
  const Dataset data = LoadData(args.data_path, TargetKindFor(loss.kind), err);
  CheckShape(file, data);

  const std::vector<RowIndex> all = ParseIndices(args.indices);
  CheckUniqueInRange(all, data.rows());
  for (RowIndex i : all) {
    if (!file.removal_state.IsLive(i)) {
      throw Error(ErrorCode::kStaleIndex, "row " + std::to_string(i) + " was already removed");
    }
  }
  if (static_cast<Eigen::Index>(all.size()) >= file.removal_state.live_count) {
    throw Error(ErrorCode::kParameter, "removal would leave no live rows; retrain instead");
  }

  RemoveSummary summary;
  const auto batches = SplitBatches(all, args.batch_size);
  for (size_t bi = 0; bi < batches.size(); ++bi) {
    const auto start = Clock::now();
    const RemovalOutcome outcome = RemoveBatch(file.model, file.removal_state, batches[bi],
                                               data, loss, file.ledger);
    summary.removal_ms += MillisSince(start);
    if (outcome.status == RemovalStatus::kRetrainRequired) {
      for (size_t r = bi; r < batches.size(); ++r) {
        summary.remaining.insert(summary.remaining.end(), batches[r].begin(), batches[r].end());
      }
      out << "retrain required: batch " << bi + 1 << " increment "
          << FormatDouble(outcome.residual_bound_increment) << " exceeds remaining budget "
          << FormatDouble(file.ledger.Remaining()) << "\n"
          << "remaining indices: " << JoinIndices(summary.remaining) << "\n";
      summary.exit_code = kExitRetrainRequired;
      break;
    }
    ++summary.batches_applied;
    summary.increments.push_back(outcome.residual_bound_increment);
    out << "batch " << bi + 1 << ": size=" << batches[bi].size()
        << " increment=" << FormatDouble(outcome.residual_bound_increment)
        << " beta=" << FormatDouble(file.ledger.beta_accumulated()) << "/"
        << FormatDouble(file.ledger.beta_max()) << "\n";
  }
  summary.beta_accumulated = file.ledger.beta_accumulated();
  if (summary.batches_applied > 0) SaveJsonAtomic(args.model_path, ToJson(file));
  summary.total_ms = MillisSince(total_start);
  out << "removed " << summary.batches_applied << " batch(es): live_count="
      << file.removal_state.live_count << " removal_ms=" << summary.removal_ms
      << " total_ms=" << summary.total_ms << "\n";
  return summary;
}

RetrainSummary CmdRetrain(const RetrainArgs& args, std::ostream& out, std::ostream& err) {
  const auto total_start = Clock::now();
  const json j = LoadJson(args.model_path);
  const std::string fingerprint = FileFingerprint(args.data_path);
  const std::string out_path = args.out_path.empty() ? args.model_path : args.out_path;
  RetrainSummary summary;
  if (IsMultiClassJson(j)) {
    MultiClassModelFile bundle = MultiClassFromJson(j);
    CheckFingerprint(bundle.dataset_fingerprint, fingerprint);
    const Dataset data = LoadData(args.data_path, TargetKind::kClassLabel, err);
    for (size_t c = 0; c < bundle.classes.size(); ++c) {
      ModelFile& file = bundle.classes[c];
      const Dataset subset = ClassSubset(data, file.row_map, bundle.labels[c]);
      summary.retrain_ms +=
          RetrainModelFile(file, subset, args.seed + static_cast<std::uint64_t>(c), args.tol);
      summary.live_rows += file.removal_state.live_count;
    }
    SaveJsonAtomic(out_path, ToJson(bundle));
  } else {
    ModelFile file = ModelFileFromJson(j);
    CheckFingerprint(file.dataset_fingerprint, fingerprint);
    const Dataset data = LoadData(args.data_path, TargetKindFor(file.model.loss_kind), err);
    CheckShape(file, data);
    summary.retrain_ms = RetrainModelFile(file, data, args.seed, args.tol);
    summary.live_rows = file.removal_state.live_count;
    SaveJsonAtomic(out_path, ToJson(file));
  }
  summary.total_ms = MillisSince(total_start);
  out << "retrained on " << summary.live_rows << " live rows: retrain_ms="
      << summary.retrain_ms << " total_ms=" << summary.total_ms << "\n";
  return summary;
}

oracle::AuditReport CmdAudit(const AuditArgs& args, std::ostream& out, std::ostream& err) {
  const json j = LoadJson(args.model_path);
  if (IsMultiClassJson(j)) {
    throw Error(ErrorCode::kUnsupported, "audit supports binary model files only");
  }
  ModelFile file = ModelFileFromJson(j);
  CheckFingerprint(file.dataset_fingerprint, FileFingerprint(args.data_path));
  const ConvexLoss loss = ConvexLoss::FromKind(file.model.loss_kind);
  const Dataset data = LoadData(args.data_path, TargetKindFor(loss.kind), err);
  CheckShape(file, data);

  const std::vector<RowIndex> batch = ParseIndices(args.indices);
  const RemovalPlan plan = PlanRemoval(file.model, file.removal_state, batch, data, loss);
  const oracle::AuditReport report =
      oracle::AuditRemoval(file.model, plan.new_weights, plan.live_after, data, loss,
                           plan.increment, plan.worst_case);
  json doc{{"removed", batch},
           {"true_residual_norm", report.true_residual_norm},
           {"unperturbed_residual_norm", report.unperturbed_residual_norm},
           {"claimed_bound", report.claimed_bound},
           {"worst_case_bound", report.worst_case_bound.has_value()
                                    ? json(*report.worst_case_bound)
                                    : json(nullptr)},
           {"weight_gap", report.weight_gap},
           {"slack", report.slack},
           {"bound_holds", report.bound_holds}};
  if (args.out_path.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    SaveJsonAtomic(args.out_path, doc);
  }
  return report;
}

SweepPoint RunSweepPoint(const Dataset& train, const Dataset& test,
                         const ConvexLoss& loss, double lambda, double sigma,
                         double epsilon, double delta, int trials,
                         std::uint64_t seed, std::int64_t max_removals,
                         double grad_tol) {
  if (trials < 1) throw Error(ErrorCode::kParameter, "trials must be >= 1");
  SweepPoint point;
  point.lambda = lambda;
  point.sigma = sigma;
  const std::int64_t cap = std::min<std::int64_t>(max_removals, train.rows() - 1);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(t);
    const auto start = Clock::now();
    PerturbedModel model = Train(train, loss, lambda, sigma, epsilon, delta, trial_seed, grad_tol);
    RemovalState state = RemovalState::ForDataset(train);
    point.retrain_ms.push_back(MillisSince(start));
    point.test_accuracy.push_back(SignAccuracy(model.weights, test));

    BudgetLedger ledger = LedgerFor(model);
    std::vector<RowIndex> order = AllRows(train);
    std::mt19937_64 rng(trial_seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(order.begin(), order.end(), rng);

    std::int64_t removed = 0;
    double removal_ms = 0.0;
    bool rejected = false;
    while (removed < cap) {
      const RowIndex row = order[static_cast<size_t>(removed)];
      const auto rstart = Clock::now();
      const RemovalOutcome outcome =
          RemoveBatch(model, state, RowSpan(&row, 1), train, loss, ledger);
      removal_ms += MillisSince(rstart);
      if (outcome.status == RemovalStatus::kRetrainRequired) {
        rejected = true;
        break;
      }
      ++removed;
    }
    point.supported_removals.push_back(removed);
    const std::int64_t attempts = std::max<std::int64_t>(1, removed + (rejected ? 1 : 0));
    point.removal_ms_mean.push_back(removal_ms / static_cast<double>(attempts));
    point.hit_cap.push_back(!rejected);
  }
  return point;
}

void CmdSweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  if (args.lambdas.empty() || args.sigmas.empty()) {
    throw Error(ErrorCode::kParameter, "--lams and --sigmas must be non-empty");
  }
  if (args.out_path.empty()) throw Error(ErrorCode::kParameter, "--out is required");
  const ConvexLoss loss = ConvexLoss::FromKind(ParseLossKind(args.loss));
  const Dataset train = LoadData(args.data_path, TargetKindFor(loss.kind), err);
  const Dataset test = LoadData(args.test_data_path, TargetKindFor(loss.kind), err);
  if (test.dim() != train.dim()) {
    throw Error(ErrorCode::kShape, "train and test feature counts differ");
  }
  const double tol = args.tol.value_or(DefaultGradTol(train.rows()));

  std::ofstream csv(args.out_path, std::ios::trunc);
  if (!csv) throw Error(ErrorCode::kIo, "cannot write " + args.out_path);
  csv << "lambda,sigma,test_accuracy,supported_removals_mean,supported_removals_std,"
         "removal_ms_mean,retrain_ms\n";
  csv.flush();

  auto mean = [](const auto& v) {
    double s = 0.0;
    for (auto x : v) s += static_cast<double>(x);
    return s / static_cast<double>(v.size());
  };
  for (double lambda : args.lambdas) {
    for (double sigma : args.sigmas) {
      const SweepPoint p = RunSweepPoint(train, test, loss, lambda, sigma, args.epsilon,
                                         args.delta, args.trials, args.seed,
                                         args.max_removals, tol);
      const double m = mean(p.supported_removals);
      double var = 0.0;
      for (auto c : p.supported_removals) var += (static_cast<double>(c) - m) * (static_cast<double>(c) - m);
      const double sd = p.supported_removals.size() > 1
                            ? std::sqrt(var / static_cast<double>(p.supported_removals.size() - 1))
                            : 0.0;
      const double removal_ms = args.timing ? mean(p.removal_ms_mean) : 0.0;
      const double retrain_ms = args.timing ? mean(p.retrain_ms) : 0.0;
      csv << FormatDouble(lambda) << "," << FormatDouble(sigma) << ","
          << FormatDouble(mean(p.test_accuracy)) << "," << FormatDouble(m) << ","
          << FormatDouble(sd) << "," << FormatDouble(removal_ms) << ","
          << FormatDouble(retrain_ms) << "\n";
      csv.flush();
      const bool capped = std::any_of(p.hit_cap.begin(), p.hit_cap.end(), [](bool b) { return b; });
      out << "lambda=" << lambda << " sigma=" << sigma << " accuracy=" << mean(p.test_accuracy)
          << " supported_removals=" << m << (capped ? " (reached --max-removals)" : "") << "\n";
    }
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"Certified removal for L2-regularized linear models"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a removal-enabled model");
  train_cmd->add_option("--data", train.data_path, "Training CSV")->required();
  train_cmd->add_option("--loss", train.loss, "logistic | ls")
      ->check(CLI::IsMember({"logistic", "ls", "least_squares"}));
  train_cmd->add_option("--lam", train.lambda, "L2 regularization strength")->required();
  train_cmd->add_option("--sigma", train.sigma, "Std. dev. of the perturbation b")->required();
  train_cmd->add_option("--eps", train.epsilon, "Removal epsilon");
  train_cmd->add_option("--delta", train.delta, "Removal delta");
  train_cmd->add_option("--seed", train.seed, "Seed for b");
  train_cmd->add_option("--tol", train.tol, "Gradient-norm tolerance");
  train_cmd->add_option("--out", train.out_path, "Model file to write")->required();
  train_cmd->add_flag("--multiclass", train.multiclass, "Train one-vs-all binary models");

  RemoveArgs remove;
  bool remove_multiclass = false;
  auto* remove_cmd = app.add_subcommand("remove", "Remove rows with the Newton update");
  remove_cmd->add_option("--model", remove.model_path)->required();
  remove_cmd->add_option("--data", remove.data_path)->required();
  remove_cmd->add_option("--indices", remove.indices, "Comma list or file of row indices")
      ->required();
  remove_cmd->add_option("--batch-size", remove.batch_size, "Split indices into batches");
  remove_cmd->add_flag("--multiclass", remove_multiclass,
                       "Accepted for symmetry; the model file records its kind");

  RetrainArgs retrain;
  auto* retrain_cmd = app.add_subcommand("retrain", "Retrain on live rows with a fresh b");
  retrain_cmd->add_option("--model", retrain.model_path)->required();
  retrain_cmd->add_option("--data", retrain.data_path)->required();
  retrain_cmd->add_option("--seed", retrain.seed, "Fresh seed for b")->required();
  retrain_cmd->add_option("--tol", retrain.tol);
  retrain_cmd->add_option("--out", retrain.out_path, "Defaults to --model");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Compare a hypothetical removal to retraining");
  audit_cmd->add_option("--model", audit.model_path)->required();
  audit_cmd->add_option("--data", audit.data_path)->required();
  audit_cmd->add_option("--indices", audit.indices)->required();
  audit_cmd->add_option("--out", audit.out_path, "JSON report path (default stdout)");

  SweepArgs sweep;
  bool no_timing = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy vs supported removals over a grid");
  sweep_cmd->add_option("--data", sweep.data_path)->required();
  sweep_cmd->add_option("--test-data", sweep.test_data_path)->required();
  sweep_cmd->add_option("--loss", sweep.loss)
      ->check(CLI::IsMember({"logistic", "ls", "least_squares"}));
  sweep_cmd->add_option("--lams", sweep.lambdas)->delimiter(',')->required();
  sweep_cmd->add_option("--sigmas", sweep.sigmas)->delimiter(',')->required();
  sweep_cmd->add_option("--eps", sweep.epsilon);
  sweep_cmd->add_option("--delta", sweep.delta);
  sweep_cmd->add_option("--trials", sweep.trials);
  sweep_cmd->add_option("--seed", sweep.seed);
  sweep_cmd->add_option("--max-removals", sweep.max_removals);
  sweep_cmd->add_option("--tol", sweep.tol);
  sweep_cmd->add_option("--out", sweep.out_path)->required();
  sweep_cmd->add_flag("--no-timing", no_timing, "Write 0 in the timing columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (train_cmd->parsed()) {
      CmdTrain(train, std::cout, std::cerr);
    } else if (remove_cmd->parsed()) {
      return CmdRemove(remove, std::cout, std::cerr).exit_code;
    } else if (retrain_cmd->parsed()) {
      CmdRetrain(retrain, std::cout, std::cerr);
    } else if (audit_cmd->parsed()) {
      CmdAudit(audit, std::cout, std::cerr);
    } else if (sweep_cmd->parsed()) {
      sweep.timing = !no_timing;
      CmdSweep(sweep, std::cout, std::cerr);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
  return kExitOk;
}

}  // namespace certremove::cli
