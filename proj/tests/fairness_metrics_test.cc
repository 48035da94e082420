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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cei/error.h"
#include "cei/synthetic.h"
#include "test_support.h"

namespace cei {
namespace {

using ::cei::testing::Duplicated;

Distribution Bins(std::vector<double> mass) {
  const std::size_t n = mass.size();
  return Distribution(BinGrid(0.0, 1.0, n), std::move(mass), 0);
}

GroupRates Rates(std::string group, double fmr, double fnmr, std::size_t n = 1000) {
  GroupRates r;
  r.group = std::move(group);
  r.fmr = fmr;
  r.fnmr = fnmr;
  r.n_impostor = n;
  r.n_genuine = n;
  return r;
}

TEST(DivergenceIndexTest, Formulas) {
  const std::vector<double> s{0.1, 0.3, 0.2};
  const double log2k = std::log2(3.0);
  EXPECT_NEAR(DivergenceIndex(s, Variant::kNormal), 1.0 - 0.6 / (3.0 * log2k), 1e-15);
  EXPECT_NEAR(DivergenceIndex(s, Variant::kExtreme), 1.0 - 0.3 / log2k, 1e-15);
  const std::vector<double> one{0.1};
  try {
    DivergenceIndex(one, Variant::kNormal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKTooSmall);
  }
}

TEST(DfiTest, TwoBinExample) {
  const std::vector<Distribution> dists{Bins({0.5, 0.5}), Bins({0.25, 0.75})};
  EXPECT_NEAR(Dfi(dists, Variant::kNormal), 0.95120505930460147, 1e-9);
  EXPECT_NEAR(Dfi(dists, Variant::kExtreme), 0.94896482080494367, 1e-9);
}

TEST(DfiTest, IdenticalIsExactlyOne) {
  std::mt19937_64 rng(1);
  for (std::size_t k = 2; k <= 7; ++k) {
    const std::vector<Distribution> dists(k, testing::RandomDistribution(rng, 64));
    EXPECT_EQ(Dfi(dists, Variant::kNormal), 1.0) << k;
    EXPECT_EQ(Dfi(dists, Variant::kExtreme), 1.0) << k;
  }
}

TEST(DfiTest, GridMismatch) {
  const std::vector<Distribution> dists{Bins({0.5, 0.5}), Bins({0.25, 0.25, 0.5})};
  EXPECT_THROW(Dfi(dists, Variant::kNormal), Error);
}

TEST(CombinedDistributionsTest, PoolsBothKinds) {
  const std::vector<Distribution> dists =
      CombinedDistributions(testing::FourRecordSet(), 7);
  ASSERT_EQ(dists.size(), 2u);
  EXPECT_EQ(dists[0].grid(), BinGrid(0.2, 0.9, 7));
  EXPECT_EQ(dists[0].count(), 2u);
  EXPECT_DOUBLE_EQ(dists[0].mass(0), 0.5);
  EXPECT_DOUBLE_EQ(dists[0].mass(6), 0.5);
}

TEST(InequityTest, Examples) {
  const std::vector<double> equal{0.02, 0.02, 0.02};
  EXPECT_EQ(Inequity(equal), 1.0);
  const std::vector<double> two{0.001, 0.003};
  EXPECT_NEAR(Inequity(two), 1.7320508075688773, 1e-12);
}

TEST(InequityTest, ScaleInvariant) {
  const std::vector<double> r{0.001, 0.004, 0.0025};
  std::vector<double> scaled = r;
  for (double& x : scaled) x *= 37.5;
  EXPECT_NEAR(Inequity(r), Inequity(scaled), 1e-12);
}

TEST(InequityTest, ZeroRateFlooredWithFlag) {
  const std::vector<GroupRates> rates{Rates("A", 0.0, 0.1, 500), Rates("B", 0.004, 0.1, 500)};
  const InequityResult fmr = Inequity(rates, RateKind::kFmr);
  EXPECT_TRUE(fmr.floored);
  EXPECT_NEAR(fmr.value, 0.004 / std::sqrt(0.001 * 0.004), 1e-12);
  const InequityResult fnmr = Inequity(rates, RateKind::kFnmr);
  EXPECT_FALSE(fnmr.floored);
  EXPECT_EQ(fnmr.value, 1.0);
  const std::vector<double> raw{0.0, 0.1};
  EXPECT_THROW(Inequity(raw), Error);
}

TEST(InequityTest, UndefinedRate) {
  std::vector<GroupRates> rates{Rates("A", 0.1, 0.1), Rates("B", 0.1, 0.1)};
  rates[1].fmr.reset();
  try {
    Inequity(rates, RateKind::kFmr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedRate);
  }
  EXPECT_EQ(Inequity(rates, RateKind::kFnmr).value, 1.0);
}

TEST(GarbeTest, Examples) {
  const std::vector<double> equal{0.3, 0.3, 0.3, 0.3};
  EXPECT_EQ(Garbe(equal), 0.0);
  const std::vector<double> two{0.001, 0.003};
  EXPECT_NEAR(Garbe(two), 0.25, 1e-12);
  const std::vector<GroupRates> rates{Rates("A", 0.001, 0.5), Rates("B", 0.003, 0.5)};
  EXPECT_NEAR(Garbe(rates, RateKind::kFmr), 0.25, 1e-12);
  EXPECT_EQ(Garbe(rates, RateKind::kFnmr), 0.0);
}

TEST(GarbeTest, ZeroMeanAndNegative) {
  const std::vector<double> zeros{0.0, 0.0};
  try {
    Garbe(zeros);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroMeanRate);
  }
  const std::vector<double> negative{-0.1, 0.2};
  EXPECT_THROW(Garbe(negative), Error);
}

TEST(GarbeTest, GiniBoundBruteForce) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 2 + rng() % 9;
    std::vector<double> r(k);
    for (double& x : r) x = u(rng) < 0.3 ? 0.0 : u(rng);
    if (std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; })) r[0] = 0.5;
    const double g = Garbe(r);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0 - 1.0 / static_cast<double>(k) + 1e-12);
  }
  // The bound is attained when a single group carries every error.
  const std::vector<double> concentrated{0.0, 0.0, 0.0, 0.2};
  EXPECT_NEAR(Garbe(concentrated), 0.75, 1e-12);
}

TEST(CeiScoresTest, FourBinExample) {
  const std::vector<Distribution> dists{Bins({0.4, 0.4, 0.1, 0.1}),
                                        Bins({0.4, 0.4, 0.05, 0.15})};
  const CeiScores s = ComputeCeiScores(dists, ErrorSide::kHigh, 80.0, {0.8, 0.2});
  EXPECT_NEAR(s.threshold, 0.5, 1e-12);
  ASSERT_EQ(s.dissimilarity.size(), 2u);
  EXPECT_NEAR(s.dissimilarity[0], 0.037243761756592588, 1e-9);
  EXPECT_NEAR(s.dissimilarity[1], 0.040828143356045064, 1e-9);
  EXPECT_NEAR(s.tail_mass[0], 0.2, 1e-12);
  const CeiResult n = CeiFromDissimilarities(s.dissimilarity, Variant::kNormal);
  const CeiResult e = CeiFromDissimilarities(s.dissimilarity, Variant::kExtreme);
  EXPECT_NEAR(n.value, 0.96096404744368117, 1e-9);
  EXPECT_NEAR(e.value, 0.95917185664395494, 1e-9);
  EXPECT_FALSE(n.clamped);
}

TEST(CeiScoresTest, LinearInWeights) {
  std::mt19937_64 rng(2);
  const std::vector<Distribution> dists{testing::RandomDistribution(rng, 30, 0.0),
                                        testing::RandomDistribution(rng, 30, 0.0),
                                        testing::RandomDistribution(rng, 30, 0.0)};
  const auto tail = ComputeCeiScores(dists, ErrorSide::kLow, 90.0, {1.0, 0.0});
  const auto center = ComputeCeiScores(dists, ErrorSide::kLow, 90.0, {0.0, 1.0});
  const auto mixed = ComputeCeiScores(dists, ErrorSide::kLow, 90.0, {0.3, 0.7});
  for (std::size_t i = 0; i < dists.size(); ++i) {
    EXPECT_NEAR(mixed.dissimilarity[i],
                0.3 * tail.dissimilarity[i] + 0.7 * center.dissimilarity[i], 1e-12);
  }
}

TEST(CeiScoresTest, IdenticalGroupsAreZero) {
  std::mt19937_64 rng(4);
  const Distribution d = testing::RandomDistribution(rng, 50, 0.0);
  const std::vector<Distribution> dists(4, d);
  for (const auto source : {ThresholdSource::kMeanDistribution,
                            ThresholdSource::kPooledDistribution, ThresholdSource::kPerGroup}) {
    const CeiScores s = ComputeCeiScores(dists, ErrorSide::kHigh, 95.0, {0.8, 0.2},
                                         kDefaultSmoothing, source);
    for (double x : s.dissimilarity) EXPECT_EQ(x, 0.0);
  }
}

TEST(CeiScoresTest, AdversarialTailSkewClamps) {
  // Group A keeps almost no mass beyond the threshold, so the mean tail is
  // dominated by B and A's renormalized tail diverges by more than log2 K.
  const std::vector<Distribution> dists{Bins({0.5, 0.49, 0.01, 0.0}),
                                        Bins({0.5, 0.3, 0.0, 0.2})};
  const CeiScores s = ComputeCeiScores(dists, ErrorSide::kHigh, 89.5, {0.8, 0.2});
  EXPECT_GT(s.dissimilarity[0], 1.0);
  const CeiResult e = CeiFromDissimilarities(s.dissimilarity, Variant::kExtreme);
  EXPECT_TRUE(e.clamped);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_LT(e.raw, 0.0);
}

TEST(CeiTest, ScoreLevelEntryPoints) {
  const GroupScores groups{{"A", {0.1, 0.2, 0.3, 0.8}}, {"B", {0.1, 0.2, 0.3, 0.8}}};
  const BinGrid grid(0.0, 1.0, 10);
  CeiConfig cfg;
  cfg.percentile = 75.0;
  const auto s = CeiDissimilarities(groups, grid, cfg, Polarity::kSimilarity);
  EXPECT_EQ(s.at("A"), 0.0);
  EXPECT_EQ(s.at("B"), 0.0);
  EXPECT_EQ(Cei(groups, grid, cfg, Polarity::kSimilarity, Variant::kNormal).value, 1.0);
  cfg.weights = {0.9, 0.2};
  EXPECT_THROW(Cei(groups, grid, cfg, Polarity::kSimilarity, Variant::kNormal), Error);
  cfg.allow_unnormalized_weights = true;
  EXPECT_NO_THROW(Cei(groups, grid, cfg, Polarity::kSimilarity, Variant::kNormal));
  cfg.percentile = 100.0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(MetricSelectionTest, ParseAndName) {
  EXPECT_EQ(ParseMetricSelection("all"), MetricSelection{});
  const auto cei = ParseMetricSelection("cei");
  ASSERT_TRUE(cei.has_value());
  EXPECT_FALSE(cei->dfi || cei->garbe || cei->inequity);
  EXPECT_TRUE(cei->cei);
  EXPECT_FALSE(cei->needs_operating_point());
  EXPECT_EQ(MetricSelectionName(*ParseMetricSelection("in,dfi")), "dfi,in");
  EXPECT_FALSE(ParseMetricSelection("dfi,gini").has_value());
  const auto none = ParseMetricSelection("");
  ASSERT_TRUE(none.has_value());
  EXPECT_FALSE(none->any());
}

TEST(ThresholdSourceTest, Names) {
  for (const auto s : {ThresholdSource::kMeanDistribution, ThresholdSource::kPooledDistribution,
                       ThresholdSource::kPerGroup}) {
    EXPECT_EQ(ParseThresholdSource(ThresholdSourceName(s)), s);
  }
}

TEST(EvalOptionsTest, Validation) {
  EvalOptions o;
  EXPECT_THROW(o.Validate(), Error);  // GARBE and IN need a target
  o.target_fmr = 0.01;
  EXPECT_NO_THROW(o.Validate());
  o.metrics = MetricSelection{false, false, false, false};
  EXPECT_THROW(o.Validate(), Error);
  o.metrics = *ParseMetricSelection("cei");
  o.target_fmr.reset();
  EXPECT_NO_THROW(o.Validate());
  o.weight_sets = {{0.5, 0.6}};
  EXPECT_THROW(o.Validate(), Error);
  o.allow_unnormalized_weights = true;
  EXPECT_NO_THROW(o.Validate());
  o.smoothing = 0.0;
  EXPECT_THROW(o.Validate(), Error);
}

ScoreSet SmallClean(std::uint64_t seed, std::size_t n = 2000) {
  ScenarioSpec spec;
  spec.n_genuine = n;
  spec.n_impostor = n;
  spec.seed = seed;
  spec.genuine = {0.6, 0.1};
  spec.impostor = {0.4, 0.1};
  return Generate(spec);
}

EvalOptions FullSweep() {
  EvalOptions o;
  o.target_fmr = 0.1;
  o.percentiles = {75.0, 90.0, 95.0};
  o.weight_sets = {{0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2}};
  return o;
}

TEST(EvaluateAllTest, DuplicatedGroupIsFair) {
  const ScoreSet base = SmallClean(3);
  std::vector<ScoreRecord> a;
  for (const ScoreRecord& r : base.records()) {
    if (r.group == "A") a.push_back(r);
  }
  const MetricReport report =
      EvaluateAll(Duplicated(a, {"A", "B", "C"}, Polarity::kSimilarity), FullSweep());
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report.dfi_n.value, 1.0);
  EXPECT_EQ(report.dfi_e.value, 1.0);
  EXPECT_EQ(report.garbe_fmr.value, 0.0);
  EXPECT_EQ(report.garbe_fnmr.value, 0.0);
  EXPECT_EQ(report.in_fmr.value, 1.0);
  EXPECT_EQ(report.in_fnmr.value, 1.0);
  ASSERT_EQ(report.cei.size(), 9u);
  for (const CeiCell& cell : report.cei) {
    for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
      EXPECT_NEAR(*cell.ForKind(kind).normal.value, 1.0, 1e-12);
      EXPECT_NEAR(*cell.ForKind(kind).extreme.value, 1.0, 1e-12);
    }
  }
}

TEST(EvaluateAllTest, SweepShapeAndProvenance) {
  const MetricReport report = EvaluateAll(SmallClean(5), FullSweep(), "mem");
  EXPECT_EQ(report.config.source, "mem");
  EXPECT_EQ(report.config.options, FullSweep());
  ASSERT_TRUE(report.config.threshold.has_value());
  EXPECT_LE(*report.config.achieved_fmr, 0.1);
  ASSERT_EQ(report.group_rates.size(), 2u);
  ASSERT_EQ(report.cei.size(), 9u);
  EXPECT_NE(report.FindCei(90.0, {0.5, 0.5}), nullptr);
  EXPECT_EQ(report.FindCei(99.0, {0.5, 0.5}), nullptr);
  EXPECT_TRUE(report.cei[0].genuine.threshold.has_value());
}

TEST(EvaluateAllTest, SelectorLimitsOutput) {
  EvalOptions o = FullSweep();
  o.metrics = *ParseMetricSelection("cei");
  o.target_fmr.reset();
  const MetricReport report = EvaluateAll(SmallClean(6), o);
  EXPECT_FALSE(report.dfi_n.value.has_value());
  EXPECT_FALSE(report.garbe_fmr.value.has_value());
  EXPECT_FALSE(report.in_fnmr.value.has_value());
  EXPECT_FALSE(report.config.threshold.has_value());
  EXPECT_TRUE(report.group_rates.empty());
  EXPECT_EQ(report.cei.size(), 9u);
}

TEST(EvaluateAllTest, SingleGroupFailsEveryMetric) {
  const ScoreSet set({{0.9, Kind::kGenuine, "A"}, {0.1, Kind::kImpostor, "A"}},
                     Polarity::kSimilarity);
  const MetricReport report = EvaluateAll(set, FullSweep());
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.failures.size(), 4u);
  EXPECT_EQ(report.failures[0].code, "KTooSmall");
  EXPECT_EQ(report.failures[0].module, "fairness-metrics");
  EXPECT_FALSE(report.validation_flags.empty());
}

TEST(EvaluateAllTest, FailuresDoNotAbortOtherMetrics) {
  // Group B has no genuine scores: FNMR-based metrics and genuine CEI fail,
  // the rest are still computed.
  std::vector<ScoreRecord> records;
  for (int i = 0; i < 100; ++i) {
    records.push_back({0.6 + i * 0.001, Kind::kGenuine, "A"});
    records.push_back({0.2 + i * 0.002, Kind::kImpostor, "A"});
    records.push_back({0.25 + i * 0.002, Kind::kImpostor, "B"});
  }
  const MetricReport report = EvaluateAll(ScoreSet(records, Polarity::kSimilarity), FullSweep());
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.dfi_n.value.has_value());
  EXPECT_TRUE(report.garbe_fmr.value.has_value());
  EXPECT_FALSE(report.garbe_fnmr.value.has_value());
  EXPECT_FALSE(report.in_fnmr.value.has_value());
  EXPECT_TRUE(report.cei[0].impostor.normal.value.has_value());
  EXPECT_FALSE(report.cei[0].genuine.normal.value.has_value());
  bool saw_undefined = false;
  for (const MetricFailure& f : report.failures) {
    saw_undefined = saw_undefined || f.code == "UndefinedRate";
  }
  EXPECT_TRUE(saw_undefined);
}

TEST(EvaluateAllTest, ZeroErrorsAndFloorsAreWarnings) {
  // Perfectly separated scores: no errors anywhere at a tight target.
  std::vector<ScoreRecord> records;
  for (int i = 0; i < 200; ++i) {
    for (const char* g : {"A", "B"}) {
      records.push_back({0.8 + i * 0.0005, Kind::kGenuine, g});
      records.push_back({0.1 + i * 0.0005, Kind::kImpostor, g});
    }
  }
  EvalOptions o = FullSweep();
  o.target_fmr = 1e-3;
  const MetricReport report = EvaluateAll(ScoreSet(records, Polarity::kSimilarity), o);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.garbe_fnmr.value, 0.0);
  EXPECT_NE(std::find(report.garbe_fnmr.flags.begin(), report.garbe_fnmr.flags.end(),
                      "zero_mean_rate"),
            report.garbe_fnmr.flags.end());
  EXPECT_EQ(report.in_fnmr.value, 1.0);
  EXPECT_NE(std::find(report.in_fnmr.flags.begin(), report.in_fnmr.flags.end(), "rate_floor"),
            report.in_fnmr.flags.end());
}

TEST(EvaluateAllTest, Deterministic) {
  const ScoreSet set = SmallClean(9);
  EXPECT_EQ(EvaluateAll(set, FullSweep()), EvaluateAll(set, FullSweep()));
}

TEST(EvaluateAllTest, DistancePolarityMirrorsSimilarity) {
  const ScoreSet sim = SmallClean(10);
  std::vector<ScoreRecord> flipped = sim.records();
  for (ScoreRecord& r : flipped) r.score = 1.0 - r.score;
  const MetricReport a = EvaluateAll(sim, FullSweep());
  const MetricReport b = EvaluateAll(ScoreSet(flipped, Polarity::kDistance), FullSweep());
  EXPECT_NEAR(*a.dfi_n.value, *b.dfi_n.value, 1e-9);
  EXPECT_NEAR(*a.garbe_fmr.value, *b.garbe_fmr.value, 1e-12);
  EXPECT_NEAR(*a.in_fnmr.value, *b.in_fnmr.value, 1e-12);
  for (std::size_t i = 0; i < a.cei.size(); ++i) {
    EXPECT_NEAR(*a.cei[i].genuine.normal.value, *b.cei[i].genuine.normal.value, 1e-9);
    EXPECT_NEAR(*a.cei[i].impostor.extreme.value, *b.cei[i].impostor.extreme.value, 1e-9);
  }
}

}  // namespace
}  // namespace cei
