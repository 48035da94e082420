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

// Empirical FMR/FNMR at a decision threshold and selection of the operating
// threshold from a pooled false-match-rate target.
//
// Decision rule: with similarity scores a comparison is a match iff
// score >= tau; with distance scores iff score <= tau.

#ifndef CEI_ERROR_RATES_H_
#define CEI_ERROR_RATES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cei/score_data.h"

namespace cei {

bool IsMatch(double score, double tau, Polarity polarity);

// Fraction of impostor comparisons accepted at tau.
double FmrAt(std::span<const double> impostor_scores, double tau, Polarity polarity);
// Fraction of genuine comparisons rejected at tau.
double FnmrAt(std::span<const double> genuine_scores, double tau, Polarity polarity);

struct OperatingPoint {
  double threshold = 0.0;
  double target_fmr = 0.0;
  double achieved_fmr = 0.0;
  std::size_t num_impostor = 0;
  // Fewer than 1/target impostor comparisons: the target is below the rate
  // resolution of the sample.
  bool undersampled = false;
};

// Least strict threshold whose pooled FMR does not exceed target. The
// threshold is placed at the midpoint between adjacent distinct impostor
// order statistics.
OperatingPoint ThresholdAtGlobalFmr(std::span<const double> impostor_scores,
                                    Polarity polarity, double target);
OperatingPoint ThresholdAtGlobalFmr(const ScoreSet& set, double target);

struct GroupRates {
  std::string group;
  // nullopt when the group has no comparisons of that kind.
  std::optional<double> fmr;
  std::optional<double> fnmr;
  std::size_t n_impostor = 0;
  std::size_t n_genuine = 0;
  std::size_t false_matches = 0;
  std::size_t false_non_matches = 0;

  friend bool operator==(const GroupRates&, const GroupRates&) = default;
};

// One entry per group of the set, in group-key order, at the shared tau.
std::vector<GroupRates> ComputeGroupRates(const ScoreSet& set, double tau);

}  // namespace cei

#endif  // CEI_ERROR_RATES_H_
