/*
 * Copyright 2026 The CEI Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cei/score_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "cei/error.h"
#include "json.hpp"

namespace cei {
namespace {

constexpr std::string_view kModule = "score-data";

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string LineContext(std::size_t line) {
  return "line " + std::to_string(line);
}

// Splits one CSV line. Double-quoted fields may contain commas; "" inside a
// quoted field is an escaped quote. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

std::optional<double> ParseDouble(std::string_view text) {
  text = Trim(text);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

void CheckRecord(const ScoreRecord& r, std::size_t index) {
  if (!std::isfinite(r.score)) {
    throw Error(ErrorCode::kNonFiniteScore, kModule,
                "record " + std::to_string(index) + " has a non-finite score");
  }
  if (r.group.empty()) {
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "record " + std::to_string(index) + " has an empty group key");
  }
}

}  // namespace

std::string_view KindName(Kind kind) {
  return kind == Kind::kGenuine ? "genuine" : "impostor";
}

std::optional<Kind> ParseKind(std::string_view text) {
  if (text == "genuine") return Kind::kGenuine;
  if (text == "impostor") return Kind::kImpostor;
  return std::nullopt;
}

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kSimilarity ? "similarity" : "distance";
}

std::optional<Polarity> ParsePolarity(std::string_view text) {
  if (text == "similarity") return Polarity::kSimilarity;
  if (text == "distance") return Polarity::kDistance;
  return std::nullopt;
}

std::string_view ErrorSideName(ErrorSide side) {
  return side == ErrorSide::kLow ? "low" : "high";
}

ErrorSide ErrorSideFor(Polarity polarity, Kind kind) {
  const bool genuine = kind == Kind::kGenuine;
  if (polarity == Polarity::kSimilarity) {
    return genuine ? ErrorSide::kLow : ErrorSide::kHigh;
  }
  return genuine ? ErrorSide::kHigh : ErrorSide::kLow;
}

ScoreSet::ScoreSet(std::vector<ScoreRecord> records, Polarity polarity)
    : records_(std::move(records)), polarity_(polarity) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const ScoreRecord& r = records_[i];
    CheckRecord(r, i);
    auto it = counts_.find(r.group);
    if (it == counts_.end()) it = counts_.emplace(r.group, CellCounts{}).first;
    if (r.kind == Kind::kGenuine) {
      ++it->second.genuine;
    } else {
      ++it->second.impostor;
    }
  }
  groups_.reserve(counts_.size());
  for (const auto& [group, unused] : counts_) groups_.push_back(group);
}

std::size_t ScoreSet::Count(std::string_view group, Kind kind) const {
  const auto it = counts_.find(group);
  if (it == counts_.end()) return 0;
  return kind == Kind::kGenuine ? it->second.genuine : it->second.impostor;
}

std::size_t ScoreSet::Count(Kind kind) const {
  std::size_t n = 0;
  for (const auto& [group, c] : counts_) {
    n += kind == Kind::kGenuine ? c.genuine : c.impostor;
  }
  return n;
}

std::vector<double> ScoreSet::Scores(Kind kind) const {
  std::vector<double> out;
  out.reserve(Count(kind));
  for (const ScoreRecord& r : records_) {
    if (r.kind == kind) out.push_back(r.score);
  }
  return out;
}

std::vector<double> ScoreSet::AllScores() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const ScoreRecord& r : records_) out.push_back(r.score);
  return out;
}

ScoreSet ParseCsv(std::istream& in, Polarity polarity,
                  const IngestOptions& options) {
  std::string line;
  std::size_t line_no = 0;

  // Header.
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (Trim(view).empty() && options.skip_blank_lines) continue;
    line = std::string(view);
    have_header = true;
    break;
  }
  if (!have_header) {
    throw Error(ErrorCode::kEmptyFile, kModule, "no header row");
  }
  const auto header = SplitCsvLine(line);
  std::optional<std::size_t> score_col, kind_col, group_col;
  if (header) {
    for (std::size_t i = 0; i < header->size(); ++i) {
      const std::string_view name = Trim((*header)[i]);
      if (name == "score" && !score_col) score_col = i;
      if (name == "kind" && !kind_col) kind_col = i;
      if (name == "group" && !group_col) group_col = i;
    }
  }
  if (!score_col || !kind_col || !group_col) {
    throw Error(ErrorCode::kMalformedRow, kModule,
                LineContext(line_no) +
                    ": header must contain the columns score, kind, group");
  }
  const std::size_t needed = std::max({*score_col, *kind_col, *group_col}) + 1;

  std::vector<ScoreRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) {
      if (options.skip_blank_lines) continue;
      throw Error(ErrorCode::kMalformedRow, kModule, LineContext(line_no) + ": blank row");
    }
    const auto fields = SplitCsvLine(line);
    if (!fields) {
      throw Error(ErrorCode::kMalformedRow, kModule,
                  LineContext(line_no) + ": unterminated quoted field");
    }
    if (fields->size() < needed) {
      throw Error(ErrorCode::kMalformedRow, kModule,
                  LineContext(line_no) + ": expected at least " +
                      std::to_string(needed) + " fields, got " +
                      std::to_string(fields->size()));
    }
    const auto score = ParseDouble((*fields)[*score_col]);
    if (!score) {
      throw Error(ErrorCode::kMalformedRow, kModule,
                  LineContext(line_no) + ": unparsable score '" +
                      (*fields)[*score_col] + "'");
    }
    if (!std::isfinite(*score)) {
      throw Error(ErrorCode::kNonFiniteScore, kModule,
                  LineContext(line_no) + ": non-finite score");
    }
    const std::string_view kind_text = Trim((*fields)[*kind_col]);
    const auto kind = ParseKind(kind_text);
    if (!kind) {
      throw Error(ErrorCode::kUnknownKind, kModule,
                  LineContext(line_no) + ": kind must be genuine or impostor, got '" +
                      std::string(kind_text) + "'");
    }
    std::string group(Trim((*fields)[*group_col]));
    if (group.empty()) {
      throw Error(ErrorCode::kMalformedRow, kModule, LineContext(line_no) + ": empty group");
    }
    records.push_back({*score, *kind, std::move(group)});
  }
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyFile, kModule, "header present but no data rows");
  }
  return ScoreSet(std::move(records), polarity);
}

ScoreSet IngestCsv(const std::filesystem::path& path, Polarity polarity,
                   const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, kModule, "cannot open " + path.string());
  }
  return ParseCsv(in, polarity, options);
}

ScoreSet ParseJsonScores(std::string_view text, Polarity polarity) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedRow, kModule, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kMalformedRow, kModule, "top-level JSON value must be an array");
  }
  if (doc.empty()) throw Error(ErrorCode::kEmptyFile, kModule, "empty score array");
  std::vector<ScoreRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& row = doc[i];
    const std::string where = "element " + std::to_string(i);
    if (!row.is_object() || !row.contains("score") || !row.contains("kind") ||
        !row.contains("group") || !row["kind"].is_string() || !row["group"].is_string()) {
      throw Error(ErrorCode::kMalformedRow, kModule,
                  where + ": expected {score: number, kind: string, group: string}");
    }
    if (!row["score"].is_number()) {
      throw Error(ErrorCode::kNonFiniteScore, kModule, where + ": score is not a finite number");
    }
    const double score = row["score"].get<double>();
    if (!std::isfinite(score)) {
      throw Error(ErrorCode::kNonFiniteScore, kModule, where + ": non-finite score");
    }
    const auto kind_text = row["kind"].get<std::string>();
    const auto kind = ParseKind(kind_text);
    if (!kind) {
      throw Error(ErrorCode::kUnknownKind, kModule,
                  where + ": kind must be genuine or impostor, got '" + kind_text + "'");
    }
    auto group = row["group"].get<std::string>();
    if (group.empty()) throw Error(ErrorCode::kMalformedRow, kModule, where + ": empty group");
    records.push_back({score, *kind, std::move(group)});
  }
  return ScoreSet(std::move(records), polarity);
}

ScoreSet IngestJson(const std::filesystem::path& path, Polarity polarity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, kModule, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseJsonScores(buffer.str(), polarity);
}

ValidationReport ValidateForFairness(const ScoreSet& set, std::size_t min_per_cell) {
  ValidationReport report;
  report.num_groups = set.num_groups();
  report.min_per_cell = min_per_cell;
  if (set.num_groups() < 2) {
    report.flags.push_back("K<2: fairness undefined (found " +
                           std::to_string(set.num_groups()) + " group)");
  }
  for (const std::string& group : set.groups()) {
    CellCount cell{group, set.Count(group, Kind::kGenuine),
                   set.Count(group, Kind::kImpostor)};
    for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
      const std::size_t n = kind == Kind::kGenuine ? cell.genuine : cell.impostor;
      if (n < min_per_cell) {
        report.flags.push_back("cell (" + group + ", " + std::string(KindName(kind)) +
                               ") has " + std::to_string(n) + " records, below " +
                               std::to_string(min_per_cell));
      }
    }
    report.counts.push_back(std::move(cell));
  }
  return report;
}

GroupScores Partition(const ScoreSet& set, Kind kind) {
  GroupScores out;
  for (const std::string& group : set.groups()) {
    out[group].reserve(set.Count(group, kind));
  }
  for (const ScoreRecord& r : set.records()) {
    if (r.kind == kind) out[r.group].push_back(r.score);
  }
  return out;
}

}  // namespace cei
