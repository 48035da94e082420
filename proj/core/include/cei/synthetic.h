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

// Seeded synthetic similarity-score populations with injected demographic
// bias. One group is biased; the rest share the reference laws.
//
//   kBiasedGenuineTail  - the biased group's genuine law becomes a mixture
//                         with a component reaching into the impostor region.
//   kBiasedImpostorTail - the same on the impostor law, toward the genuine
//                         region.
//   kBiasedCenters      - both of the biased group's laws move away from the
//                         decision region by strength * center_shift, with
//                         spreads re-solved so the error-side quantiles at the
//                         operating point equal the reference's.
//
// All base laws are normals truncated to [0, 1].

#ifndef CEI_SYNTHETIC_H_
#define CEI_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cei/score_data.h"

namespace cei {

enum class Scenario {
  kClean,
  kBiasedGenuineTail,
  kBiasedImpostorTail,
  kBiasedCenters,
};

// "clean", "bg", "bi", "bc".
std::string_view ScenarioName(Scenario scenario);
std::optional<Scenario> ParseScenario(std::string_view text);

struct ScoreLaw {
  double mean = 0.5;
  double stddev = 0.1;

  friend bool operator==(const ScoreLaw&, const ScoreLaw&) = default;
};

struct ScenarioSpec {
  Scenario scenario = Scenario::kClean;
  std::size_t n_genuine = 100000;  // per group
  std::size_t n_impostor = 100000;  // per group
  std::vector<std::string> groups{"A", "B"};
  // Defaults to the last entry of groups.
  std::string biased_group;
  // Tail scenarios: mixture weight of the tail component, in [0, 1].
  // Center scenario: multiples of center_shift.
  double strength = 0.0;
  std::uint64_t seed = 42;

  ScoreLaw genuine{0.75, 0.10};
  ScoreLaw impostor{0.35, 0.05};
  ScoreLaw genuine_tail{0.45, 0.05};
  ScoreLaw impostor_tail{0.50, 0.04};
  double center_shift = 0.25;
  // FMR of the reference impostor law at the point where BC matches tails.
  double operating_fmr = 3e-3;

  const std::string& BiasedGroup() const;
  // Throws InvalidSpec.
  void Validate() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

ScenarioSpec ParseScenarioSpecJson(std::string_view text);
std::string ScenarioSpecToJson(const ScenarioSpec& spec);

// Truncated-normal helpers on [0, 1].
double TruncatedNormalCdf(const ScoreLaw& law, double x);
double TruncatedNormalQuantile(const ScoreLaw& law, double p);

// Generating laws of one group, after scenario adjustments.
struct GroupLaws {
  ScoreLaw genuine;
  ScoreLaw impostor;
  // Mixture components and weights (zero weight: unused).
  ScoreLaw genuine_tail;
  double genuine_tail_weight = 0.0;
  ScoreLaw impostor_tail;
  double impostor_tail_weight = 0.0;
};

// Score at which the reference impostor law's FMR equals operating_fmr.
double ReferenceOperatingThreshold(const ScenarioSpec& spec);

GroupLaws ResolveGroupLaws(const ScenarioSpec& spec, std::string_view group);

// Records are emitted group by group (in spec order), genuine before
// impostor. Deterministic in the spec; each (group, kind) draws from its own
// sub-seeded streams.
ScoreSet Generate(const ScenarioSpec& spec);

// CSV with header "score,kind,group"; scores written in shortest round-trip
// form.
void WriteCsv(const ScoreSet& set, std::ostream& out);
void ExportCsv(const ScoreSet& set, const std::filesystem::path& path);

}  // namespace cei

#endif  // CEI_SYNTHETIC_H_
