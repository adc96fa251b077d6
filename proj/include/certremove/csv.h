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

#ifndef CERTREMOVE_CSV_H_
#define CERTREMOVE_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "certremove/dataset.h"

namespace certremove {

enum class TargetKind {
  kBinary,      // {-1, +1}; {0, 1} is accepted and remapped 0 -> -1
  kReal,        // any finite value
  kClassLabel,  // integer class ids for one-vs-all training
};

struct IngestResult {
  Dataset data;
  bool had_header = false;
  bool remapped_zero_one = false;
  std::vector<std::string> warnings;
};

// Parses comma-separated rows of reals, last column the target. A single
// leading header line is detected when any of its cells is not numeric.
// LF and CRLF line endings are accepted; blank lines are skipped. Throws
// Error(kIngestion) naming the 1-based line of the first bad row.
IngestResult ParseCsv(std::string_view text, TargetKind kind,
                      bool normalize = true);

// Reads the file and parses it as above. Normalization is applied unless
// `normalize` is false.
IngestResult IngestCsv(const std::string& path, TargetKind kind,
                       bool normalize = true);

// Writes rows as "x_1,...,x_d,y" with round-trip precision.
void WriteCsv(const std::string& path, const Dataset& data);

std::string ReadFile(const std::string& path);

// Hex SHA-256 of the file contents.
std::string FileFingerprint(const std::string& path);

}  // namespace certremove

#endif  // CERTREMOVE_CSV_H_
