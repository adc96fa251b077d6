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

#ifndef CERTREMOVE_COMMANDS_H_
#define CERTREMOVE_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "certremove/dataset.h"
#include "certremove/error.h"
#include "certremove/loss.h"
#include "certremove/oracle.h"

// The command implementations behind the `certremove` binary. Each command
// writes human-readable progress to `out`, warnings to `err`, and throws
// certremove::Error on failure; Main() maps errors to exit codes.
namespace certremove::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitRetrainRequired = 2,
  kExitInputError = 3,
  kExitNumericError = 4,
};

int ExitCodeFor(ErrorCode code);

struct TrainArgs {
  std::string data_path;
  std::string loss = "logistic";
  double lambda = 1e-3;
  double sigma = 1.0;
  double epsilon = 1.0;
  double delta = 1e-4;
  std::uint64_t seed = 0;
  std::optional<double> tol;  // default 1e-10 * max(1, n)
  std::string out_path;
  bool multiclass = false;
};

struct TrainSummary {
  double train_ms = 0.0;  // optimizer plus gram accumulation
  double total_ms = 0.0;
  double train_accuracy = 0.0;  // sign agreement, or argmax for one-vs-all
  double beta_max = 0.0;        // of the first model for one-vs-all
  int models = 1;
};

TrainSummary CmdTrain(const TrainArgs& args, std::ostream& out, std::ostream& err);

struct RemoveArgs {
  std::string model_path;
  std::string data_path;
  std::string indices;  // comma list, or a path to a file of indices
  std::int64_t batch_size = 0;  // 0: the whole list is one batch
};

struct RemoveSummary {
  int exit_code = kExitOk;
  int batches_applied = 0;
  std::vector<double> increments;
  double beta_accumulated = 0.0;
  double removal_ms = 0.0;  // time inside the removal mechanism
  double total_ms = 0.0;
  // Indices not removed because a batch required retraining.
  std::vector<RowIndex> remaining;
};

RemoveSummary CmdRemove(const RemoveArgs& args, std::ostream& out, std::ostream& err);

struct RetrainArgs {
  std::string model_path;
  std::string data_path;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out_path;  // empty: overwrite model_path
};

struct RetrainSummary {
  double retrain_ms = 0.0;  // optimizer plus gram accumulation
  double total_ms = 0.0;
  Eigen::Index live_rows = 0;
};

RetrainSummary CmdRetrain(const RetrainArgs& args, std::ostream& out, std::ostream& err);

struct AuditArgs {
  std::string model_path;
  std::string data_path;
  std::string indices;
  std::string out_path;  // empty: JSON to `out`
};

oracle::AuditReport CmdAudit(const AuditArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
  std::string data_path;
  std::string test_data_path;
  std::string loss = "logistic";
  std::vector<double> lambdas;
  std::vector<double> sigmas;
  double epsilon = 1.0;
  double delta = 1e-4;
  int trials = 3;
  std::uint64_t seed = 0;
  std::int64_t max_removals = 1000;
  std::optional<double> tol;
  std::string out_path;
  bool timing = true;  // false: timing columns written as 0
};

void CmdSweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

// Per-trial results for one (lambda, sigma) grid point. Trial t trains with
// seed + t and removes live rows one at a time in a seeded random order until
// the budget rejects a removal or max_removals is reached.
struct SweepPoint {
  double lambda = 0.0;
  double sigma = 0.0;
  std::vector<double> test_accuracy;
  std::vector<std::int64_t> supported_removals;
  std::vector<double> removal_ms_mean;
  std::vector<double> retrain_ms;
  std::vector<bool> hit_cap;
};

SweepPoint RunSweepPoint(const Dataset& train, const Dataset& test,
                         const ConvexLoss& loss, double lambda, double sigma,
                         double epsilon, double delta, int trials,
                         std::uint64_t seed, std::int64_t max_removals,
                         double grad_tol);

// Comma/whitespace separated integers, or the contents of the file `spec`
// names when such a file exists.
std::vector<RowIndex> ParseIndices(const std::string& spec);

// Fraction of rows with sign(w'x) == sign(y).
double SignAccuracy(const Eigen::VectorXd& w, const Dataset& data);

int Main(int argc, char** argv);

}  // namespace certremove::cli

#endif  // CERTREMOVE_COMMANDS_H_
