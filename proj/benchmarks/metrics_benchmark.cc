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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cei/distribution.h"
#include "cei/error_rates.h"
#include "cei/fairness_metrics.h"
#include "cei/synthetic.h"

namespace cei {
namespace {

std::vector<double> Scores(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> law(0.5, 0.1);
  std::vector<double> v(n);
  for (double& x : v) x = law(rng);
  return v;
}

std::vector<Distribution> Groups(std::size_t k, std::size_t n) {
  const BinGrid grid(0.0, 1.0, kDefaultBins);
  std::vector<Distribution> dists;
  std::mt19937_64 rng(2);
  for (std::size_t g = 0; g < k; ++g) {
    std::normal_distribution<double> law(0.5 + 0.01 * g, 0.1);
    std::vector<double> v(n);
    for (double& x : v) x = law(rng);
    dists.push_back(BuildDistribution(v, grid));
  }
  return dists;
}

void BM_BuildDistribution(benchmark::State& state) {
  const std::vector<double> v = Scores(static_cast<std::size_t>(state.range(0)));
  const BinGrid grid(0.0, 1.0, kDefaultBins);
  for (auto _ : state) benchmark::DoNotOptimize(BuildDistribution(v, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildDistribution)->Arg(1 << 10)->Arg(1 << 17);

void BM_KlDivergence(benchmark::State& state) {
  const std::vector<Distribution> d = Groups(2, 10000);
  for (auto _ : state) benchmark::DoNotOptimize(KlDivergence(d[0], d[1]));
}
BENCHMARK(BM_KlDivergence);

void BM_CeiScores(benchmark::State& state) {
  const std::vector<Distribution> d = Groups(static_cast<std::size_t>(state.range(0)), 10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeCeiScores(d, ErrorSide::kHigh, 95.0, {0.8, 0.2}));
  }
}
BENCHMARK(BM_CeiScores)->Arg(2)->Arg(8);

void BM_ThresholdAtGlobalFmr(benchmark::State& state) {
  const std::vector<double> v = Scores(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ThresholdAtGlobalFmr(v, Polarity::kSimilarity, 1e-3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ThresholdAtGlobalFmr)->Arg(1 << 17);

void BM_EvaluateAll(benchmark::State& state) {
  ScenarioSpec spec;
  spec.scenario = Scenario::kBiasedGenuineTail;
  spec.strength = 0.05;
  const ScoreSet set = Generate(spec);
  EvalOptions options;
  options.target_fmr = 3e-3;
  for (auto _ : state) benchmark::DoNotOptimize(EvaluateAll(set, options));
}
BENCHMARK(BM_EvaluateAll)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cei

BENCHMARK_MAIN();
