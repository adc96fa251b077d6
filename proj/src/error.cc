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

#include "certremove/error.h"

namespace certremove {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kParameter:
      return "parameter";
    case ErrorCode::kStaleIndex:
      return "stale_index";
    case ErrorCode::kUnsupported:
      return "unsupported";
    case ErrorCode::kIngestion:
      return "ingestion";
    case ErrorCode::kFingerprint:
      return "fingerprint";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kNumeric:
      return "numeric";
    case ErrorCode::kConvergence:
      return "convergence";
  }
  return "unknown";
}

}  // namespace certremove
