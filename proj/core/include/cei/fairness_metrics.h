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

// Demographic fairness metrics over per-group score data.
//
//   DFI   - divergence of each group's combined genuine+impostor score
//           distribution from the mean distribution, normalized by log2(K).
//   IN    - worst group error rate over the geometric mean of group rates.
//   GARBE - Gini-style mean absolute difference of group error rates.
//   CEI   - DFI-style index computed per comparison kind after splitting each
//           distribution into an error-side tail and a center at a shared
//           percentile threshold and weighting the two divergences.

#ifndef CEI_FAIRNESS_METRICS_H_
#define CEI_FAIRNESS_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cei/distribution.h"
#include "cei/error_rates.h"
#include "cei/score_data.h"

namespace cei {

enum class Variant { kNormal, kExtreme };
enum class RateKind { kFmr, kFnmr };

// 1 - sum(s) / (K log2 K) for kNormal, 1 - max(s) / log2 K for kExtreme.
// Unclamped. Requires K = s.size() >= 2.
double DivergenceIndex(std::span<const double> divergences, Variant variant);

// S_i = KL(z_i || mean(z)) for every distribution.
std::vector<double> DivergencesFromMean(std::span<const Distribution> dists,
                                        double smoothing = kDefaultSmoothing);

double Dfi(std::span<const Distribution> dists, Variant variant,
           double smoothing = kDefaultSmoothing);

// Per-group genuine+impostor distributions on a grid spanning every score of
// the set, as DFI consumes them.
std::vector<Distribution> CombinedDistributions(const ScoreSet& set,
                                                std::size_t num_bins = kDefaultBins);

struct InequityResult {
  double value = 1.0;
  // Some zero rate was replaced by 1/(2n) of its cell.
  bool floored = false;
};

InequityResult Inequity(std::span<const GroupRates> rates, RateKind which);
// Raw form; zero rates must not occur.
double Inequity(std::span<const double> rates);

double Garbe(std::span<const GroupRates> rates, RateKind which);
double Garbe(std::span<const double> rates);

struct WeightPair {
  double tail = 0.5;
  double center = 0.5;

  friend bool operator==(const WeightPair&, const WeightPair&) = default;
};

// Where the shared split threshold is read from.
enum class ThresholdSource {
  kMeanDistribution,    // percentile of the mean of the group distributions
  kPooledDistribution,  // percentile of all scores of the kind pooled
  kPerGroup,            // each group split at its own percentile
};

std::string_view ThresholdSourceName(ThresholdSource source);
std::optional<ThresholdSource> ParseThresholdSource(std::string_view text);

struct CeiConfig {
  double percentile = 95.0;
  WeightPair weights{0.8, 0.2};
  Kind kind = Kind::kGenuine;
  ThresholdSource threshold_source = ThresholdSource::kMeanDistribution;
  // Accept weight pairs that do not sum to one.
  bool allow_unnormalized_weights = false;

  // Throws InvalidConfig.
  void Validate() const;
};

struct CeiScores {
  // Shared split threshold (the mean distribution's, for kPerGroup).
  double threshold = 0.0;
  // S'_i in group order.
  std::vector<double> dissimilarity;
  // Pre-renormalization tail mass of each group at its threshold.
  std::vector<double> tail_mass;
};

// Distribution-level core: dists are the K groups' distributions of one kind
// on a shared grid.
CeiScores ComputeCeiScores(std::span<const Distribution> dists, ErrorSide side,
                           double percentile, WeightPair weights,
                           double smoothing = kDefaultSmoothing,
                           ThresholdSource source = ThresholdSource::kMeanDistribution);

// Score-level entry point. grid must contain every score; the kind's error
// side follows from polarity.
std::map<std::string, double> CeiDissimilarities(const GroupScores& group_scores,
                                                 const BinGrid& grid,
                                                 const CeiConfig& config,
                                                 Polarity polarity,
                                                 double smoothing = kDefaultSmoothing);

struct CeiResult {
  double value = 1.0;
  // Value before clamping to [0, 1].
  double raw = 1.0;
  bool clamped = false;
  double threshold = 0.0;
};

CeiResult CeiFromDissimilarities(std::span<const double> dissimilarity, Variant variant);

CeiResult Cei(const GroupScores& group_scores, const BinGrid& grid,
              const CeiConfig& config, Polarity polarity, Variant variant,
              double smoothing = kDefaultSmoothing);

// ---------------------------------------------------------------------------
// Full evaluation.

struct MetricSelection {
  bool dfi = true;
  bool garbe = true;
  bool inequity = true;
  bool cei = true;

  bool any() const { return dfi || garbe || inequity || cei; }
  bool needs_operating_point() const { return garbe || inequity; }
  friend bool operator==(const MetricSelection&, const MetricSelection&) = default;
};

// "all" or a comma list of dfi, garbe, in, cei.
std::optional<MetricSelection> ParseMetricSelection(std::string_view text);
std::string MetricSelectionName(const MetricSelection& selection);

struct EvalOptions {
  std::size_t num_bins = kDefaultBins;
  double smoothing = kDefaultSmoothing;
  // Required when GARBE or IN is selected.
  std::optional<double> target_fmr;
  std::vector<double> percentiles{75.0, 90.0, 95.0};
  std::vector<WeightPair> weight_sets{{0.5, 0.5}, {0.8, 0.2}};
  MetricSelection metrics;
  ThresholdSource threshold_source = ThresholdSource::kMeanDistribution;
  std::size_t min_per_cell = kDefaultMinPerCell;
  bool allow_unnormalized_weights = false;

  // Throws InvalidConfig.
  void Validate() const;
  friend bool operator==(const EvalOptions&, const EvalOptions&) = default;
};

// A metric value with its warnings. value is empty when the metric failed;
// the matching entry in MetricReport::failures says why.
struct MetricValue {
  std::optional<double> value;
  std::vector<std::string> flags;

  friend bool operator==(const MetricValue&, const MetricValue&) = default;
};

struct CeiKindResult {
  MetricValue normal;
  MetricValue extreme;
  std::optional<double> threshold;

  friend bool operator==(const CeiKindResult&, const CeiKindResult&) = default;
};

// One (percentile, weights) configuration of the CEI sweep.
struct CeiCell {
  double percentile = 95.0;
  WeightPair weights;
  CeiKindResult genuine;
  CeiKindResult impostor;

  const CeiKindResult& ForKind(Kind kind) const {
    return kind == Kind::kGenuine ? genuine : impostor;
  }
  friend bool operator==(const CeiCell&, const CeiCell&) = default;
};

struct MetricFailure {
  std::string metric;
  std::string module;
  std::string code;
  std::string message;

  friend bool operator==(const MetricFailure&, const MetricFailure&) = default;
};

struct Provenance {
  std::string source;
  Polarity polarity = Polarity::kSimilarity;
  EvalOptions options;
  std::optional<double> threshold;
  std::optional<double> achieved_fmr;
  std::vector<CellCount> counts;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct MetricReport {
  int schema_version = kReportSchemaVersion;
  Provenance config;

  MetricValue dfi_n;
  MetricValue dfi_e;
  MetricValue garbe_fmr;
  MetricValue garbe_fnmr;
  MetricValue in_fmr;
  MetricValue in_fnmr;
  std::vector<GroupRates> group_rates;

  std::vector<CeiCell> cei;

  std::vector<std::string> validation_flags;
  std::vector<MetricFailure> failures;

  // The sweep cell matching (percentile, weights), if evaluated.
  const CeiCell* FindCei(double percentile, WeightPair weights) const;
  bool ok() const { return failures.empty(); }

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Evaluates every selected metric. Metric-level errors are collected into
// report.failures instead of aborting the remaining metrics. Throws only for
// invalid options.
MetricReport EvaluateAll(const ScoreSet& set, const EvalOptions& options,
                         std::string source = {});

}  // namespace cei

#endif  // CEI_FAIRNESS_METRICS_H_
