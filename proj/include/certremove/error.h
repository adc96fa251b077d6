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

#ifndef CERTREMOVE_ERROR_H_
#define CERTREMOVE_ERROR_H_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace certremove {

enum class ErrorCode {
  kDomain,        // loss evaluated outside its target domain
  kShape,         // dimension mismatch
  kParameter,     // hyperparameter or argument out of range
  kStaleIndex,    // row index out of range, duplicated, or already removed
  kUnsupported,   // operation undefined for this loss (e.g. no finite C)
  kIngestion,     // malformed input file
  kFingerprint,   // data file does not match the model
  kIo,            // filesystem failure
  kNumeric,       // factorization failure
  kConvergence,   // optimizer did not reach its tolerance
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when the trainer hits its iteration cap. Carries the best iterate so
// callers can decide whether it is usable.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, Eigen::VectorXd best_iterate,
                   double best_grad_norm)
      : Error(ErrorCode::kConvergence, message),
        best_iterate_(std::move(best_iterate)),
        best_grad_norm_(best_grad_norm) {}

  const Eigen::VectorXd& best_iterate() const { return best_iterate_; }
  double best_grad_norm() const { return best_grad_norm_; }

 private:
  Eigen::VectorXd best_iterate_;
  double best_grad_norm_;
};

}  // namespace certremove

#endif  // CERTREMOVE_ERROR_H_
