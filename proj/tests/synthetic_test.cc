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

#include "cei/synthetic.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cei/error.h"
#include "cei/error_rates.h"
#include "cei/fairness_metrics.h"
#include "test_support.h"

namespace cei {
namespace {

using ::cei::testing::KsCritical01;
using ::cei::testing::KsStatistic;
using ::cei::testing::TruncatedNormalSurvival;

ScenarioSpec Spec(Scenario scenario, double strength, std::size_t n = 20000) {
  ScenarioSpec spec;
  spec.scenario = scenario;
  spec.strength = strength;
  spec.n_genuine = n;
  spec.n_impostor = n;
  return spec;
}

std::vector<double> Cell(const ScoreSet& set, const std::string& group, Kind kind) {
  return Partition(set, kind).at(group);
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

TEST(ScenarioTest, Names) {
  for (const auto s : {Scenario::kClean, Scenario::kBiasedGenuineTail,
                       Scenario::kBiasedImpostorTail, Scenario::kBiasedCenters}) {
    EXPECT_EQ(ParseScenario(ScenarioName(s)), s);
  }
  EXPECT_EQ(ScenarioName(Scenario::kBiasedCenters), "bc");
  EXPECT_FALSE(ParseScenario("BG").has_value());
}

TEST(ScenarioSpecTest, Validation) {
  ScenarioSpec spec;
  EXPECT_NO_THROW(spec.Validate());
  EXPECT_EQ(spec.BiasedGroup(), "B");
  const auto invalid = [](ScenarioSpec s) {
    try {
      s.Validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidSpec;
    }
    return false;
  };
  ScenarioSpec s = spec;
  s.n_genuine = 0;
  EXPECT_TRUE(invalid(s));
  s = spec;
  s.groups = {"A"};
  EXPECT_TRUE(invalid(s));
  s = spec;
  s.groups = {"A", "A"};
  EXPECT_TRUE(invalid(s));
  s = spec;
  s.biased_group = "Z";
  EXPECT_TRUE(invalid(s));
  s = spec;
  s.strength = -0.1;
  EXPECT_TRUE(invalid(s));
  s = spec;
  s.scenario = Scenario::kBiasedGenuineTail;
  s.strength = 1.5;
  EXPECT_TRUE(invalid(s));
  s.scenario = Scenario::kBiasedCenters;
  EXPECT_FALSE(invalid(s));
  s = spec;
  s.impostor.stddev = 0.0;
  EXPECT_TRUE(invalid(s));
}

TEST(ScenarioSpecTest, JsonRoundTripAndStrictKeys) {
  ScenarioSpec spec = Spec(Scenario::kBiasedImpostorTail, 0.125);
  spec.groups = {"x", "y", "z"};
  spec.biased_group = "y";
  spec.seed = 0xFFFFFFFFFFFFFFFFull;
  spec.impostor_tail = {0.55, 0.03};
  EXPECT_EQ(ParseScenarioSpecJson(ScenarioSpecToJson(spec)), spec);
  EXPECT_EQ(ParseScenarioSpecJson(R"({"scenario":"bc","strength":0.5})").scenario,
            Scenario::kBiasedCenters);
  EXPECT_THROW(ParseScenarioSpecJson(R"({"scenaro":"bc"})"), Error);
  EXPECT_THROW(ParseScenarioSpecJson(R"({"scenario":"xx"})"), Error);
  EXPECT_THROW(ParseScenarioSpecJson("not json"), Error);
}

TEST(TruncatedNormalTest, MatchesErfcOracle) {
  const ScoreLaw law{0.35, 0.05};
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    EXPECT_NEAR(1.0 - TruncatedNormalCdf(law, x), TruncatedNormalSurvival(0.35, 0.05, x),
                1e-12);
  }
  for (double p : {1e-6, 0.003, 0.5, 0.997, 1.0 - 1e-6}) {
    EXPECT_NEAR(TruncatedNormalCdf(law, TruncatedNormalQuantile(law, p)), p, 1e-10);
  }
  const ScoreLaw wide{0.9, 0.5};
  EXPECT_GE(TruncatedNormalQuantile(wide, 0.0), 0.0);
  EXPECT_LE(TruncatedNormalQuantile(wide, 1.0), 1.0);
}

TEST(GenerateTest, ShapeAndDeterminism) {
  const ScenarioSpec spec = Spec(Scenario::kBiasedGenuineTail, 0.1, 1000);
  const ScoreSet a = Generate(spec);
  EXPECT_EQ(a.size(), 4000u);
  EXPECT_EQ(a.polarity(), Polarity::kSimilarity);
  EXPECT_EQ(a.records().front().group, "A");
  EXPECT_EQ(a.records().front().kind, Kind::kGenuine);
  for (const ScoreRecord& r : a.records()) {
    EXPECT_GE(r.score, 0.0);
    EXPECT_LE(r.score, 1.0);
  }
  EXPECT_EQ(Generate(spec), a);
  ScenarioSpec other = spec;
  other.seed = 43;
  EXPECT_NE(Generate(other), a);
}

TEST(GenerateTest, ZeroStrengthIsClean) {
  const ScoreSet clean = Generate(Spec(Scenario::kClean, 0.0, 5000));
  for (const auto s : {Scenario::kBiasedGenuineTail, Scenario::kBiasedImpostorTail,
                       Scenario::kBiasedCenters}) {
    EXPECT_EQ(Generate(Spec(s, 0.0, 5000)), clean) << ScenarioName(s);
  }
}

TEST(GenerateTest, CleanGroupsIndistinguishable) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ScenarioSpec spec = Spec(Scenario::kClean, 0.0, 20000);
    spec.seed = seed;
    const ScoreSet set = Generate(spec);
    for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
      const auto a = Cell(set, "A", kind);
      const auto b = Cell(set, "B", kind);
      EXPECT_LT(KsStatistic(a, b), KsCritical01(a.size(), b.size()));
    }
  }
}

TEST(GenerateTest, TailScenariosLeaveOtherKindUntouched) {
  const ScoreSet bg = Generate(Spec(Scenario::kBiasedGenuineTail, 0.05));
  auto a = Cell(bg, "A", Kind::kImpostor);
  auto b = Cell(bg, "B", Kind::kImpostor);
  EXPECT_LT(KsStatistic(a, b), KsCritical01(a.size(), b.size()));
  a = Cell(bg, "A", Kind::kGenuine);
  b = Cell(bg, "B", Kind::kGenuine);
  EXPECT_GT(KsStatistic(a, b), KsCritical01(a.size(), b.size()));

  const ScoreSet bi = Generate(Spec(Scenario::kBiasedImpostorTail, 0.04));
  a = Cell(bi, "A", Kind::kGenuine);
  b = Cell(bi, "B", Kind::kGenuine);
  EXPECT_LT(KsStatistic(a, b), KsCritical01(a.size(), b.size()));
  a = Cell(bi, "A", Kind::kImpostor);
  b = Cell(bi, "B", Kind::kImpostor);
  EXPECT_GT(KsStatistic(a, b), KsCritical01(a.size(), b.size()));
}

TEST(GenerateTest, BgInflatesLowGenuineTail) {
  const ScoreSet set = Generate(Spec(Scenario::kBiasedGenuineTail, 0.05, 100000));
  std::vector<double> ref = Cell(set, "A", Kind::kGenuine);
  const std::vector<double> biased = Cell(set, "B", Kind::kGenuine);
  std::sort(ref.begin(), ref.end());
  const double p5 = ref[ref.size() / 20];
  const double mass = static_cast<double>(std::count_if(
                          biased.begin(), biased.end(), [&](double s) { return s < p5; })) /
                      static_cast<double>(biased.size());
  // Three binomial standard errors above 5%.
  const double se = std::sqrt(0.05 * 0.95 / static_cast<double>(biased.size()));
  EXPECT_GT(mass, 0.05 + 3.0 * se);
}

TEST(GenerateTest, TargetedEffectMonotoneInStrength) {
  const ScenarioSpec base = Spec(Scenario::kBiasedGenuineTail, 0.0, 20000);
  const double tau = ReferenceOperatingThreshold(base);
  double prev_g = -1.0;
  double prev_i = -1.0;
  for (const double s : {0.0, 0.02, 0.05, 0.1, 0.3}) {
    const ScoreSet bg = Generate(Spec(Scenario::kBiasedGenuineTail, s, 20000));
    const double g = FnmrAt(Cell(bg, "B", Kind::kGenuine), tau, Polarity::kSimilarity);
    EXPECT_GE(g, prev_g) << s;
    prev_g = g;
    const ScoreSet bi = Generate(Spec(Scenario::kBiasedImpostorTail, s, 20000));
    const double i = FmrAt(Cell(bi, "B", Kind::kImpostor), tau, Polarity::kSimilarity);
    EXPECT_GE(i, prev_i) << s;
    prev_i = i;
  }
  double prev_gap = -1.0;
  for (const double s : {0.0, 0.5, 1.0, 1.5}) {
    const ScoreSet bc = Generate(Spec(Scenario::kBiasedCenters, s, 20000));
    const double gap = Mean(Cell(bc, "B", Kind::kGenuine)) - Mean(Cell(bc, "B", Kind::kImpostor));
    EXPECT_GT(gap, prev_gap) << s;
    prev_gap = gap;
  }
}

TEST(ResolveGroupLawsTest, BcMatchesTailsAnalytically) {
  const ScenarioSpec spec = Spec(Scenario::kBiasedCenters, 1.0);
  const double tau = ReferenceOperatingThreshold(spec);
  const GroupLaws ref = ResolveGroupLaws(spec, "A");
  const GroupLaws biased = ResolveGroupLaws(spec, "B");
  EXPECT_EQ(ref.impostor, spec.impostor);
  EXPECT_NEAR(biased.impostor.mean, spec.impostor.mean - spec.center_shift, 1e-15);
  EXPECT_NEAR(biased.genuine.mean, spec.genuine.mean + spec.center_shift, 1e-15);
  // Independent erfc evaluation of both error-side tails at tau.
  EXPECT_NEAR(TruncatedNormalSurvival(biased.impostor.mean, biased.impostor.stddev, tau),
              spec.operating_fmr, 1e-6);
  EXPECT_NEAR(1.0 - TruncatedNormalSurvival(biased.genuine.mean, biased.genuine.stddev, tau),
              1.0 - TruncatedNormalSurvival(spec.genuine.mean, spec.genuine.stddev, tau), 1e-6);
}

TEST(GenerateTest, BcEqualRatesButShiftedShape) {
  const ScenarioSpec spec = Spec(Scenario::kBiasedCenters, 1.0, 1000000);
  const ScoreSet bc = Generate(spec);
  const double tau = ReferenceOperatingThreshold(spec);
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(a, b); };
  const double fmr_a = FmrAt(Cell(bc, "A", Kind::kImpostor), tau, Polarity::kSimilarity);
  const double fmr_b = FmrAt(Cell(bc, "B", Kind::kImpostor), tau, Polarity::kSimilarity);
  const double fnmr_a = FnmrAt(Cell(bc, "A", Kind::kGenuine), tau, Polarity::kSimilarity);
  const double fnmr_b = FnmrAt(Cell(bc, "B", Kind::kGenuine), tau, Polarity::kSimilarity);
  EXPECT_LT(rel(fmr_a, fmr_b), 0.10) << fmr_a << " " << fmr_b;
  EXPECT_LT(rel(fnmr_a, fnmr_b), 0.10) << fnmr_a << " " << fnmr_b;

  const auto total_kl = [](const ScoreSet& set) {
    const auto s = DivergencesFromMean(CombinedDistributions(set));
    return std::accumulate(s.begin(), s.end(), 0.0);
  };
  const ScoreSet clean = Generate(Spec(Scenario::kClean, 0.0, 1000000));
  EXPECT_GE(total_kl(bc), 10.0 * total_kl(clean));
}

TEST(WriteCsvTest, HeaderAndRowCount) {
  ScenarioSpec spec = Spec(Scenario::kClean, 0.0, 7);
  spec.n_impostor = 5;
  spec.groups = {"A", "B", "C"};
  std::ostringstream out;
  WriteCsv(Generate(spec), out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "score,kind,group");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * (7 + 5));
}

TEST(WriteCsvTest, QuotesAwkwardGroups) {
  const ScoreSet set({{0.5, Kind::kGenuine, "a,b"}, {0.25, Kind::kImpostor, "say \"hi\""}},
                     Polarity::kSimilarity);
  std::ostringstream out;
  WriteCsv(set, out);
  EXPECT_EQ(out.str(), "score,kind,group\n0.5,genuine,\"a,b\"\n0.25,impostor,\"say \"\"hi\"\"\"\n");
  std::istringstream in(out.str());
  EXPECT_EQ(ParseCsv(in, Polarity::kSimilarity), set);
}

TEST(ExportCsvTest, IoError) {
  try {
    ExportCsv(Generate(Spec(Scenario::kClean, 0.0, 1)), "/nonexistent/dir/out.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace cei
