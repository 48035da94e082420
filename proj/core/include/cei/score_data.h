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

// Labeled comparison scores: the data model every metric consumes.

#ifndef CEI_SCORE_DATA_H_
#define CEI_SCORE_DATA_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cei {

enum class Kind { kGenuine, kImpostor };

// Similarity: larger scores mean "more alike". Distance: the opposite.
enum class Polarity { kSimilarity, kDistance };

// Which end of a score distribution holds the verification errors.
enum class ErrorSide { kLow, kHigh };

std::string_view KindName(Kind kind);
std::optional<Kind> ParseKind(std::string_view text);
std::string_view PolarityName(Polarity polarity);
std::optional<Polarity> ParsePolarity(std::string_view text);
std::string_view ErrorSideName(ErrorSide side);

// Genuine errors (false non-matches) sit at low similarity / high distance;
// impostor errors (false matches) at high similarity / low distance.
ErrorSide ErrorSideFor(Polarity polarity, Kind kind);

struct ScoreRecord {
  double score = 0.0;
  Kind kind = Kind::kGenuine;
  std::string group;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

// Immutable, validated collection of comparison records. Construction
// rejects non-finite scores and empty group keys; fairness preconditions
// (K >= 2, populated cells) are checked separately by ValidateForFairness.
class ScoreSet {
 public:
  ScoreSet(std::vector<ScoreRecord> records, Polarity polarity);

  const std::vector<ScoreRecord>& records() const { return records_; }
  Polarity polarity() const { return polarity_; }
  std::size_t size() const { return records_.size(); }

  // Distinct group keys in lexicographic order.
  const std::vector<std::string>& groups() const { return groups_; }
  std::size_t num_groups() const { return groups_.size(); }

  std::size_t Count(std::string_view group, Kind kind) const;
  std::size_t Count(Kind kind) const;

  // All scores of one kind regardless of group, in record order.
  std::vector<double> Scores(Kind kind) const;
  std::vector<double> AllScores() const;

  friend bool operator==(const ScoreSet& a, const ScoreSet& b) {
    return a.polarity_ == b.polarity_ && a.records_ == b.records_;
  }

 private:
  struct CellCounts {
    std::size_t genuine = 0;
    std::size_t impostor = 0;
  };

  std::vector<ScoreRecord> records_;
  Polarity polarity_;
  std::vector<std::string> groups_;
  std::map<std::string, CellCounts, std::less<>> counts_;
};

struct IngestOptions {
  bool skip_blank_lines = true;
};

// CSV with a header naming at least the columns score, kind and group (in
// any order; extra columns are ignored). kind is "genuine" or "impostor".
ScoreSet ParseCsv(std::istream& in, Polarity polarity,
                  const IngestOptions& options = {});
ScoreSet IngestCsv(const std::filesystem::path& path, Polarity polarity,
                   const IngestOptions& options = {});

// JSON mirror of the CSV schema: an array of {score, kind, group} objects.
ScoreSet ParseJsonScores(std::string_view text, Polarity polarity);
ScoreSet IngestJson(const std::filesystem::path& path, Polarity polarity);

inline constexpr std::size_t kDefaultMinPerCell = 50;

struct CellCount {
  std::string group;
  std::size_t genuine = 0;
  std::size_t impostor = 0;

  friend bool operator==(const CellCount&, const CellCount&) = default;
};

struct ValidationReport {
  std::size_t num_groups = 0;
  std::size_t min_per_cell = kDefaultMinPerCell;
  std::vector<CellCount> counts;
  std::vector<std::string> flags;

  bool ok() const { return flags.empty(); }
};

ValidationReport ValidateForFairness(const ScoreSet& set,
                                     std::size_t min_per_cell = kDefaultMinPerCell);

// Group key -> scores of one kind, in record order. Every group of the set
// has an entry, possibly empty.
using GroupScores = std::map<std::string, std::vector<double>>;

GroupScores Partition(const ScoreSet& set, Kind kind);

}  // namespace cei

#endif  // CEI_SCORE_DATA_H_
