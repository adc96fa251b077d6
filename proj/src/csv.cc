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

#include "certremove/csv.h"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "certremove/error.h"

namespace certremove {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool ParseDouble(std::string_view cell, double& out) {
  cell = Trim(cell);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Splits on commas; returns false if any cell is not a number.
bool ParseRow(std::string_view line, std::vector<double>& cells) {
  cells.clear();
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    const std::string_view cell =
        line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - start);
    double v = 0.0;
    if (!ParseDouble(cell, v)) return false;
    cells.push_back(v);
    if (comma == std::string_view::npos) return true;
    start = comma + 1;
  }
}

[[noreturn]] void Fail(size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kIngestion, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

IngestResult ParseCsv(std::string_view text, TargetKind kind, bool normalize) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  IngestResult result;
  std::vector<double> values;
  std::vector<double> targets;
  std::vector<double> cells;
  size_t width = 0;
  size_t line_no = 0;
  bool first_content_line = true;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;

    if (!ParseRow(line, cells)) {
      if (first_content_line) {
        result.had_header = true;
        first_content_line = false;
        continue;
      }
      Fail(line_no, "non-numeric cell");
    }
    first_content_line = false;
    if (cells.size() < 2) Fail(line_no, "need at least one feature and a target");
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      Fail(line_no, "expected " + std::to_string(width) + " columns, found " +
                        std::to_string(cells.size()));
    }
    for (double v : cells) {
      if (!std::isfinite(v)) Fail(line_no, "non-finite value");
    }
    values.insert(values.end(), cells.begin(), cells.end() - 1);
    targets.push_back(cells.back());
    if (kind == TargetKind::kBinary) {
      const double y = cells.back();
      if (y != 1.0 && y != -1.0 && y != 0.0) {
        Fail(line_no, "label " + std::to_string(y) + " is not in {-1, +1} or {0, 1}");
      }
    } else if (kind == TargetKind::kClassLabel) {
      const double y = cells.back();
      if (y != std::floor(y)) Fail(line_no, "class label must be an integer");
    }
  }
  if (targets.empty()) {
    throw Error(ErrorCode::kIngestion, "no data rows");
  }

  const auto n = static_cast<Eigen::Index>(targets.size());
  const auto d = static_cast<Eigen::Index>(width - 1);
  FeatureMatrix features = Eigen::Map<FeatureMatrix>(values.data(), n, d);
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(targets.data(), n);

  if (kind == TargetKind::kBinary) {
    const bool has_zero = (y.array() == 0.0).any();
    const bool has_minus = (y.array() == -1.0).any();
    if (has_zero && has_minus) {
      throw Error(ErrorCode::kIngestion,
                  "labels mix {0, 1} and {-1, +1} conventions");
    }
    if (has_zero) {
      y = (y.array() == 0.0).select(-1.0, y);
      result.remapped_zero_one = true;
      result.warnings.push_back("labels {0, 1} remapped to {-1, +1}");
    }
  }

  result.data = MakeDataset(std::move(features), std::move(y));
  if (normalize) {
    result.data = NormalizeDataset(std::move(result.data));
    if (result.data.scale_factor != 1.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "rows scaled by " << result.data.scale_factor
          << " to bound every feature norm by 1";
      result.warnings.push_back(msg.str());
    }
  }
  return result;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

IngestResult IngestCsv(const std::string& path, TargetKind kind, bool normalize) {
  return ParseCsv(ReadFile(path), kind, normalize);
}

void WriteCsv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  char buf[32];
  std::string line;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), data.features(i, j));
      line.append(buf, ptr);
      line.push_back(',');
    }
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), data.targets[i]);
    line.append(buf, ptr);
    line.push_back('\n');
    out << line;
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

std::string FileFingerprint(const std::string& path) {
  const std::string bytes = ReadFile(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 failed for " + path);
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xF]);
  }
  return "sha256:" + hex;
}

}  // namespace certremove
