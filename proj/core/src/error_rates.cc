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

#include "cei/error_rates.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "cei/error.h"

namespace cei {
namespace {

constexpr std::string_view kModule = "error-rates";

}  // namespace

bool IsMatch(double score, double tau, Polarity polarity) {
  return polarity == Polarity::kSimilarity ? score >= tau : score <= tau;
}

double FmrAt(std::span<const double> impostor_scores, double tau, Polarity polarity) {
  if (impostor_scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, kModule, "FMR of an empty impostor list");
  }
  const auto matches = std::count_if(impostor_scores.begin(), impostor_scores.end(),
                                     [&](double s) { return IsMatch(s, tau, polarity); });
  return static_cast<double>(matches) / static_cast<double>(impostor_scores.size());
}

double FnmrAt(std::span<const double> genuine_scores, double tau, Polarity polarity) {
  if (genuine_scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, kModule, "FNMR of an empty genuine list");
  }
  const auto misses = std::count_if(genuine_scores.begin(), genuine_scores.end(),
                                    [&](double s) { return !IsMatch(s, tau, polarity); });
  return static_cast<double>(misses) / static_cast<double>(genuine_scores.size());
}

OperatingPoint ThresholdAtGlobalFmr(std::span<const double> impostor_scores,
                                    Polarity polarity, double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, kModule, "target FMR must lie in (0, 1]");
  }
  if (impostor_scores.empty()) {
    throw Error(ErrorCode::kUnachievable, kModule,
                "no impostor comparisons to place an operating threshold");
  }
  // Work in "strictness" order: ascending similarity, or descending distance,
  // so that a match is always x >= tau on the transformed axis.
  const double sign = polarity == Polarity::kSimilarity ? 1.0 : -1.0;
  std::vector<double> s(impostor_scores.begin(), impostor_scores.end());
  for (double& x : s) x *= sign;
  std::sort(s.begin(), s.end());

  const std::size_t n = s.size();
  // Largest number of false matches the target allows. The relative nudge
  // absorbs representation error in products like 0.2 * 10.
  const auto allowed = static_cast<std::size_t>(
      std::floor(target * static_cast<double>(n) * (1.0 + 1e-12)));
  OperatingPoint op;
  op.target_fmr = target;
  op.num_impostor = n;
  op.undersampled = static_cast<double>(n) * target < 1.0;

  double tau = 0.0;
  std::size_t accepted = 0;
  if (allowed >= n) {
    tau = s.front();
    accepted = n;
  } else {
    // Reject the k = n - allowed lowest scores; slide up past ties so the
    // cut lies strictly between two distinct values.
    std::size_t k = n - allowed;
    while (k < n && s[k] == s[k - 1]) ++k;
    if (k == n) {
      tau = std::nextafter(s.back(), std::numeric_limits<double>::infinity());
    } else {
      tau = s[k - 1] + (s[k] - s[k - 1]) / 2.0;
    }
    accepted = n - k;
  }
  op.threshold = sign * tau;
  op.achieved_fmr = static_cast<double>(accepted) / static_cast<double>(n);
  if (op.achieved_fmr > target * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kUnachievable, kModule, "cannot reach the target FMR");
  }
  return op;
}

OperatingPoint ThresholdAtGlobalFmr(const ScoreSet& set, double target) {
  const std::vector<double> impostors = set.Scores(Kind::kImpostor);
  return ThresholdAtGlobalFmr(impostors, set.polarity(), target);
}

std::vector<GroupRates> ComputeGroupRates(const ScoreSet& set, double tau) {
  std::map<std::string, GroupRates, std::less<>> by_group;
  for (const std::string& g : set.groups()) by_group[g].group = g;
  for (const ScoreRecord& r : set.records()) {
    GroupRates& rates = by_group.find(r.group)->second;
    const bool match = IsMatch(r.score, tau, set.polarity());
    if (r.kind == Kind::kImpostor) {
      ++rates.n_impostor;
      if (match) ++rates.false_matches;
    } else {
      ++rates.n_genuine;
      if (!match) ++rates.false_non_matches;
    }
  }
  std::vector<GroupRates> out;
  out.reserve(by_group.size());
  for (auto& [group, rates] : by_group) {
    if (rates.n_impostor > 0) {
      rates.fmr = static_cast<double>(rates.false_matches) /
                  static_cast<double>(rates.n_impostor);
    }
    if (rates.n_genuine > 0) {
      rates.fnmr = static_cast<double>(rates.false_non_matches) /
                   static_cast<double>(rates.n_genuine);
    }
    out.push_back(std::move(rates));
  }
  return out;
}

}  // namespace cei
