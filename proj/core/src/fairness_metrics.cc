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

#include "cei/fairness_metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cei/error.h"

namespace cei {
namespace {

constexpr std::string_view kModule = "fairness-metrics";
constexpr double kWeightSumTolerance = 1e-9;

void RequireAtLeastTwo(std::size_t k, std::string_view what) {
  if (k < 2) {
    throw Error(ErrorCode::kKTooSmall, kModule,
                std::string(what) + " needs K >= 2 groups, got " + std::to_string(k));
  }
}

double SelectRate(const GroupRates& r, RateKind which, std::size_t* n) {
  const auto& rate = which == RateKind::kFmr ? r.fmr : r.fnmr;
  *n = which == RateKind::kFmr ? r.n_impostor : r.n_genuine;
  if (!rate) {
    throw Error(ErrorCode::kUndefinedRate, kModule,
                std::string(which == RateKind::kFmr ? "FMR" : "FNMR") +
                    " undefined for group " + r.group + " (no comparisons)");
  }
  return *rate;
}

// Pooled (count-weighted) mixture of the group distributions.
Distribution PooledDistribution(std::span<const Distribution> dists) {
  const BinGrid& grid = dists.front().grid();
  std::vector<double> sum(grid.num_bins(), 0.0);
  double total = 0.0;
  std::size_t count = 0;
  for (const Distribution& d : dists) {
    const double w = static_cast<double>(d.count());
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += w * d.mass(j);
    total += w;
    count += d.count();
  }
  if (!(total > 0.0)) return MeanDistribution(dists);
  for (double& m : sum) m /= total;
  return Distribution(grid, std::move(sum), count);
}

std::string FormatNumber(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

std::string CeiMetricName(Kind kind, double percentile, WeightPair w) {
  return "cei[" + std::string(KindName(kind)) + ",P" + FormatNumber(percentile) +
         ",w=(" + FormatNumber(w.tail) + "," + FormatNumber(w.center) + ")]";
}

void RecordFailure(MetricReport& report, std::string metric, const Error& e) {
  report.failures.push_back({std::move(metric), e.module(),
                             std::string(ErrorCodeName(e.code())), e.what()});
}

}  // namespace

double DivergenceIndex(std::span<const double> divergences, Variant variant) {
  RequireAtLeastTwo(divergences.size(), "divergence index");
  const double k = static_cast<double>(divergences.size());
  const double log2k = std::log2(k);
  if (variant == Variant::kNormal) {
    double sum = 0.0;
    for (const double s : divergences) sum += s;
    return 1.0 - sum / (k * log2k);
  }
  return 1.0 - *std::max_element(divergences.begin(), divergences.end()) / log2k;
}

std::vector<double> DivergencesFromMean(std::span<const Distribution> dists,
                                        double smoothing) {
  const Distribution mean = MeanDistribution(dists);
  std::vector<double> s;
  s.reserve(dists.size());
  for (const Distribution& d : dists) s.push_back(KlDivergence(d, mean, smoothing));
  return s;
}

double Dfi(std::span<const Distribution> dists, Variant variant, double smoothing) {
  RequireAtLeastTwo(dists.size(), "DFI");
  return DivergenceIndex(DivergencesFromMean(dists, smoothing), variant);
}

std::vector<Distribution> CombinedDistributions(const ScoreSet& set,
                                                std::size_t num_bins) {
  const std::vector<double> all = set.AllScores();
  const BinGrid grid = BinGrid::Spanning(all, num_bins);
  std::map<std::string, std::vector<double>> by_group;
  for (const ScoreRecord& r : set.records()) by_group[r.group].push_back(r.score);
  std::vector<Distribution> out;
  out.reserve(by_group.size());
  for (const auto& [group, scores] : by_group) {
    out.push_back(BuildDistribution(scores, grid));
  }
  return out;
}

double Inequity(std::span<const double> rates) {
  RequireAtLeastTwo(rates.size(), "Inequity");
  const double worst = *std::max_element(rates.begin(), rates.end());
  for (const double r : rates) {
    if (!(r > 0.0)) {
      throw Error(ErrorCode::kUndefinedRate, kModule,
                  "Inequity needs strictly positive rates");
    }
  }
  // max / geomean(r) == 1 / geomean(r / max); exact for equal rates.
  double log_sum = 0.0;
  for (const double r : rates) log_sum += std::log(r / worst);
  return 1.0 / std::exp(log_sum / static_cast<double>(rates.size()));
}

InequityResult Inequity(std::span<const GroupRates> rates, RateKind which) {
  RequireAtLeastTwo(rates.size(), "Inequity");
  InequityResult result;
  std::vector<double> values;
  values.reserve(rates.size());
  for (const GroupRates& r : rates) {
    std::size_t n = 0;
    double rate = SelectRate(r, which, &n);
    if (rate == 0.0) {
      rate = 1.0 / (2.0 * static_cast<double>(n));
      result.floored = true;
    }
    values.push_back(rate);
  }
  result.value = Inequity(values);
  return result;
}

double Garbe(std::span<const double> rates) {
  RequireAtLeastTwo(rates.size(), "GARBE");
  const double k = static_cast<double>(rates.size());
  double sum = 0.0;
  for (const double r : rates) {
    if (!(r >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, kModule, "GARBE rates must be >= 0");
    }
    sum += r;
  }
  const double mean = sum / k;
  if (mean == 0.0) {
    throw Error(ErrorCode::kZeroMeanRate, kModule,
                "all rates are zero; GARBE is undefined");
  }
  double spread = 0.0;
  for (const double a : rates) {
    for (const double b : rates) spread += std::abs(a - b);
  }
  return spread / (2.0 * k * k * mean);
}

double Garbe(std::span<const GroupRates> rates, RateKind which) {
  std::vector<double> values;
  values.reserve(rates.size());
  for (const GroupRates& r : rates) {
    std::size_t n = 0;
    values.push_back(SelectRate(r, which, &n));
  }
  return Garbe(values);
}

std::string_view ThresholdSourceName(ThresholdSource source) {
  switch (source) {
    case ThresholdSource::kMeanDistribution: return "mean";
    case ThresholdSource::kPooledDistribution: return "pooled";
    case ThresholdSource::kPerGroup: return "per-group";
  }
  return "mean";
}

std::optional<ThresholdSource> ParseThresholdSource(std::string_view text) {
  if (text == "mean") return ThresholdSource::kMeanDistribution;
  if (text == "pooled") return ThresholdSource::kPooledDistribution;
  if (text == "per-group") return ThresholdSource::kPerGroup;
  return std::nullopt;
}

namespace {

void ValidateCeiParameters(double percentile, WeightPair w, bool allow_unnormalized) {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw Error(ErrorCode::kInvalidConfig, kModule,
                "CEI percentile must lie in (0, 100), got " + FormatNumber(percentile));
  }
  if (!(w.tail >= 0.0) || !(w.center >= 0.0) || !std::isfinite(w.tail) ||
      !std::isfinite(w.center)) {
    throw Error(ErrorCode::kInvalidConfig, kModule, "CEI weights must be finite and >= 0");
  }
  if (!allow_unnormalized && std::abs(w.tail + w.center - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorCode::kInvalidConfig, kModule,
                "CEI weights (" + FormatNumber(w.tail) + ", " + FormatNumber(w.center) +
                    ") do not sum to 1");
  }
}

}  // namespace

void CeiConfig::Validate() const {
  ValidateCeiParameters(percentile, weights, allow_unnormalized_weights);
}

CeiScores ComputeCeiScores(std::span<const Distribution> dists, ErrorSide side,
                           double percentile, WeightPair weights, double smoothing,
                           ThresholdSource source) {
  RequireAtLeastTwo(dists.size(), "CEI");
  const Distribution mean = MeanDistribution(dists);
  const double mean_threshold = PercentileThreshold(mean, percentile, side);
  double shared = mean_threshold;
  if (source == ThresholdSource::kPooledDistribution) {
    shared = PercentileThreshold(PooledDistribution(dists), percentile, side);
  }
  const SplitDistribution mean_split = Split(mean, shared, side);

  CeiScores scores;
  scores.threshold = shared;
  scores.dissimilarity.reserve(dists.size());
  scores.tail_mass.reserve(dists.size());
  for (const Distribution& d : dists) {
    const double t = source == ThresholdSource::kPerGroup
                         ? PercentileThreshold(d, percentile, side)
                         : shared;
    const SplitDistribution piece = Split(d, t, side);
    const double tail_kl = KlDivergence(piece.tail, mean_split.tail, smoothing);
    const double center_kl = KlDivergence(piece.center, mean_split.center, smoothing);
    scores.dissimilarity.push_back(weights.tail * tail_kl + weights.center * center_kl);
    scores.tail_mass.push_back(piece.tail_mass);
  }
  return scores;
}

namespace {

std::vector<Distribution> KindDistributions(const GroupScores& group_scores,
                                            const BinGrid& grid) {
  std::vector<Distribution> dists;
  dists.reserve(group_scores.size());
  for (const auto& [group, scores] : group_scores) {
    if (scores.empty()) {
      throw Error(ErrorCode::kEmptyInput, kModule,
                  "group " + group + " has no scores of the analysed kind");
    }
    dists.push_back(BuildDistribution(scores, grid));
  }
  return dists;
}

}  // namespace

std::map<std::string, double> CeiDissimilarities(const GroupScores& group_scores,
                                                 const BinGrid& grid,
                                                 const CeiConfig& config,
                                                 Polarity polarity, double smoothing) {
  config.Validate();
  const std::vector<Distribution> dists = KindDistributions(group_scores, grid);
  const CeiScores scores =
      ComputeCeiScores(dists, ErrorSideFor(polarity, config.kind), config.percentile,
                       config.weights, smoothing, config.threshold_source);
  std::map<std::string, double> out;
  std::size_t i = 0;
  for (const auto& [group, unused] : group_scores) {
    out[group] = scores.dissimilarity[i++];
  }
  return out;
}

CeiResult CeiFromDissimilarities(std::span<const double> dissimilarity, Variant variant) {
  CeiResult result;
  result.raw = DivergenceIndex(dissimilarity, variant);
  result.value = std::clamp(result.raw, 0.0, 1.0);
  result.clamped = result.value != result.raw;
  return result;
}

CeiResult Cei(const GroupScores& group_scores, const BinGrid& grid,
              const CeiConfig& config, Polarity polarity, Variant variant,
              double smoothing) {
  config.Validate();
  const std::vector<Distribution> dists = KindDistributions(group_scores, grid);
  const CeiScores scores =
      ComputeCeiScores(dists, ErrorSideFor(polarity, config.kind), config.percentile,
                       config.weights, smoothing, config.threshold_source);
  CeiResult result = CeiFromDissimilarities(scores.dissimilarity, variant);
  result.threshold = scores.threshold;
  return result;
}

std::optional<MetricSelection> ParseMetricSelection(std::string_view text) {
  if (text == "all") return MetricSelection{};
  MetricSelection sel{false, false, false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - start);
    if (item == "dfi") {
      sel.dfi = true;
    } else if (item == "garbe") {
      sel.garbe = true;
    } else if (item == "in" || item == "inequity") {
      sel.inequity = true;
    } else if (item == "cei") {
      sel.cei = true;
    } else if (item == "all") {
      sel = MetricSelection{};
    } else if (!item.empty()) {
      return std::nullopt;
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return sel;
}

std::string MetricSelectionName(const MetricSelection& s) {
  if (s == MetricSelection{}) return "all";
  std::string out;
  const auto add = [&out](bool on, std::string_view name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(s.dfi, "dfi");
  add(s.garbe, "garbe");
  add(s.inequity, "in");
  add(s.cei, "cei");
  return out;
}

void EvalOptions::Validate() const {
  if (!metrics.any()) {
    throw Error(ErrorCode::kInvalidConfig, kModule, "metric selection is empty");
  }
  if (num_bins == 0) {
    throw Error(ErrorCode::kInvalidConfig, kModule, "bins must be >= 1");
  }
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    throw Error(ErrorCode::kInvalidConfig, kModule, "smoothing must be > 0");
  }
  if (metrics.needs_operating_point()) {
    if (!target_fmr) {
      throw Error(ErrorCode::kInvalidConfig, kModule,
                  "a target FMR is required for GARBE and IN");
    }
    if (!(*target_fmr > 0.0 && *target_fmr <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig, kModule, "target FMR must lie in (0, 1]");
    }
  }
  if (metrics.cei) {
    if (percentiles.empty() || weight_sets.empty()) {
      throw Error(ErrorCode::kInvalidConfig, kModule,
                  "CEI needs at least one percentile and one weight set");
    }
    for (const double p : percentiles) {
      for (const WeightPair& w : weight_sets) {
        ValidateCeiParameters(p, w, allow_unnormalized_weights);
      }
    }
  }
}

const CeiCell* MetricReport::FindCei(double percentile, WeightPair weights) const {
  for (const CeiCell& cell : cei) {
    if (cell.percentile == percentile && cell.weights == weights) return &cell;
  }
  return nullptr;
}

MetricReport EvaluateAll(const ScoreSet& set, const EvalOptions& options,
                         std::string source) {
  options.Validate();
  MetricReport report;
  report.config.source = std::move(source);
  report.config.polarity = set.polarity();
  report.config.options = options;

  const ValidationReport validation = ValidateForFairness(set, options.min_per_cell);
  report.config.counts = validation.counts;
  report.validation_flags = validation.flags;
  const MetricSelection& sel = options.metrics;

  if (set.num_groups() < 2) {
    const Error e(ErrorCode::kKTooSmall, kModule,
                  "fairness metrics need K >= 2 groups, got " +
                      std::to_string(set.num_groups()));
    if (sel.dfi) RecordFailure(report, "dfi", e);
    if (sel.garbe) RecordFailure(report, "garbe", e);
    if (sel.inequity) RecordFailure(report, "in", e);
    if (sel.cei) RecordFailure(report, "cei", e);
    return report;
  }

  if (sel.dfi) {
    try {
      const auto dists = CombinedDistributions(set, options.num_bins);
      const auto s = DivergencesFromMean(dists, options.smoothing);
      report.dfi_n.value = DivergenceIndex(s, Variant::kNormal);
      report.dfi_e.value = DivergenceIndex(s, Variant::kExtreme);
    } catch (const Error& e) {
      RecordFailure(report, "dfi", e);
    }
  }

  if (sel.needs_operating_point()) {
    std::optional<OperatingPoint> op;
    try {
      op = ThresholdAtGlobalFmr(set, *options.target_fmr);
      report.config.threshold = op->threshold;
      report.config.achieved_fmr = op->achieved_fmr;
      report.group_rates = ComputeGroupRates(set, op->threshold);
    } catch (const Error& e) {
      if (sel.garbe) RecordFailure(report, "garbe", e);
      if (sel.inequity) RecordFailure(report, "in", e);
    }
    if (op) {
      const std::vector<std::string> op_flags =
          op->undersampled ? std::vector<std::string>{"undersampled_operating_point"}
                           : std::vector<std::string>{};
      for (const RateKind which : {RateKind::kFmr, RateKind::kFnmr}) {
        const std::string suffix = which == RateKind::kFmr ? "_fmr" : "_fnmr";
        if (sel.garbe) {
          MetricValue& v = which == RateKind::kFmr ? report.garbe_fmr : report.garbe_fnmr;
          v.flags = op_flags;
          try {
            v.value = Garbe(report.group_rates, which);
          } catch (const Error& e) {
            if (e.code() == ErrorCode::kZeroMeanRate) {
              // No errors in any group: trivially fair.
              v.value = 0.0;
              v.flags.push_back("zero_mean_rate");
            } else {
              RecordFailure(report, "garbe" + suffix, e);
            }
          }
        }
        if (sel.inequity) {
          MetricValue& v = which == RateKind::kFmr ? report.in_fmr : report.in_fnmr;
          v.flags = op_flags;
          try {
            const InequityResult in = Inequity(report.group_rates, which);
            v.value = in.value;
            if (in.floored) v.flags.push_back("rate_floor");
          } catch (const Error& e) {
            RecordFailure(report, "in" + suffix, e);
          }
        }
      }
    }
  }

  if (sel.cei) {
    for (const double p : options.percentiles) {
      for (const WeightPair& w : options.weight_sets) {
        CeiCell cell;
        cell.percentile = p;
        cell.weights = w;
        report.cei.push_back(cell);
      }
    }
    for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
      const GroupScores groups = Partition(set, kind);
      std::vector<Distribution> dists;
      try {
        const BinGrid grid = BinGrid::Spanning(set.Scores(kind), options.num_bins);
        for (const auto& [group, scores] : groups) {
          if (scores.empty()) {
            throw Error(ErrorCode::kEmptyInput, kModule,
                        "group " + group + " has no " + std::string(KindName(kind)) +
                            " scores");
          }
          dists.push_back(BuildDistribution(scores, grid));
        }
      } catch (const Error& e) {
        RecordFailure(report, "cei[" + std::string(KindName(kind)) + "]", e);
        continue;
      }
      const ErrorSide side = ErrorSideFor(set.polarity(), kind);
      for (CeiCell& cell : report.cei) {
        CeiKindResult& out = kind == Kind::kGenuine ? cell.genuine : cell.impostor;
        try {
          const CeiScores scores =
              ComputeCeiScores(dists, side, cell.percentile, cell.weights,
                               options.smoothing, options.threshold_source);
          out.threshold = scores.threshold;
          for (const Variant variant : {Variant::kNormal, Variant::kExtreme}) {
            const CeiResult r = CeiFromDissimilarities(scores.dissimilarity, variant);
            MetricValue& v = variant == Variant::kNormal ? out.normal : out.extreme;
            v.value = r.value;
            if (r.clamped) v.flags.push_back("clamped");
          }
        } catch (const Error& e) {
          RecordFailure(report, CeiMetricName(kind, cell.percentile, cell.weights), e);
        }
      }
    }
  }
  return report;
}

}  // namespace cei
