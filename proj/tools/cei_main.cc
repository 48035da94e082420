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

// cei: evaluate score files, generate synthetic scenarios, reproduce the
// synthetic-scenario table and re-render saved reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cei/commands.h"
#include "cei/error.h"

namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cei::Error(cei::ErrorCode::kIoError, "cli-report", "cannot open config " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

cei::OutputFormat FormatOrThrow(const std::string& text) {
  const auto format = cei::ParseOutputFormat(text);
  if (!format) {
    throw cei::Error(cei::ErrorCode::kInvalidConfig, "cli-report",
                     "unknown format '" + text + "' (json or markdown)");
  }
  return *format;
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Flags shared by evaluate and table1. Each is applied only when given, so
// values from --config survive unless overridden.
struct OptionFlags {
  std::size_t bins = 0;
  double smoothing = 0.0;
  double target_fmr = 0.0;
  std::string percentiles;
  std::string weights;
  std::string metrics;
  std::string threshold_source;
  std::size_t min_per_cell = 0;
  CLI::Option* bins_opt = nullptr;
  CLI::Option* smoothing_opt = nullptr;
  CLI::Option* target_opt = nullptr;
  CLI::Option* percentiles_opt = nullptr;
  CLI::Option* weights_opt = nullptr;
  CLI::Option* metrics_opt = nullptr;
  CLI::Option* source_opt = nullptr;
  CLI::Option* min_cell_opt = nullptr;

  void Register(CLI::App* app) {
    bins_opt = app->add_option("--bins", bins, "Histogram bins (default 100)");
    smoothing_opt = app->add_option("--smoothing", smoothing, "KL smoothing epsilon");
    target_opt = app->add_option("--target-fmr", target_fmr,
                                 "Pooled FMR defining the operating threshold");
    percentiles_opt =
        app->add_option("--percentiles", percentiles, "CEI percentiles, e.g. 75,90,95");
    weights_opt = app->add_option("--weights", weights,
                                  "CEI (tail,center) pairs, e.g. '0.5,0.5;0.8,0.2'");
    metrics_opt = app->add_option("--metrics", metrics, "all or a list of dfi,garbe,in,cei");
    source_opt = app->add_option("--threshold-source", threshold_source,
                                 "CEI split threshold from: mean, pooled or per-group");
    min_cell_opt =
        app->add_option("--min-per-cell", min_per_cell, "Scores per (group, kind) below "
                                                        "which a validation flag is raised");
  }

  void Apply(cei::EvalOptions& o) const {
    if (*bins_opt) o.num_bins = bins;
    if (*smoothing_opt) o.smoothing = smoothing;
    if (*target_opt) o.target_fmr = target_fmr;
    if (*percentiles_opt) o.percentiles = cei::ParsePercentileList(percentiles);
    if (*weights_opt) o.weight_sets = cei::ParseWeightList(weights);
    if (*metrics_opt) {
      const auto sel = cei::ParseMetricSelection(metrics);
      if (!sel) {
        throw cei::Error(cei::ErrorCode::kInvalidConfig, "cli-report",
                         "unknown metric selection '" + metrics + "'");
      }
      o.metrics = *sel;
    }
    if (*source_opt) {
      const auto source = cei::ParseThresholdSource(threshold_source);
      if (!source) {
        throw cei::Error(cei::ErrorCode::kInvalidConfig, "cli-report",
                         "unknown threshold source '" + threshold_source + "'");
      }
      o.threshold_source = *source;
    }
    if (*min_cell_opt) o.min_per_cell = min_per_cell;
  }
};

// Population flags shared by synth and table1.
struct SpecFlags {
  std::uint64_t seed = 0;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
  std::string groups;
  std::string biased_group;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* genuine_opt = nullptr;
  CLI::Option* impostor_opt = nullptr;
  CLI::Option* groups_opt = nullptr;
  CLI::Option* biased_opt = nullptr;

  void Register(CLI::App* app) {
    seed_opt = app->add_option("--seed", seed, "Random seed");
    genuine_opt = app->add_option("--n-genuine", n_genuine, "Genuine scores per group");
    impostor_opt = app->add_option("--n-impostor", n_impostor, "Impostor scores per group");
    groups_opt = app->add_option("--groups", groups, "Comma-separated group keys");
    biased_opt = app->add_option("--biased-group", biased_group,
                                 "Group receiving the bias (default: last)");
  }

  void Apply(cei::ScenarioSpec& spec) const {
    if (*seed_opt) spec.seed = seed;
    if (*genuine_opt) spec.n_genuine = n_genuine;
    if (*impostor_opt) spec.n_impostor = n_impostor;
    if (*groups_opt) spec.groups = SplitCommas(groups);
    if (*biased_opt) spec.biased_group = biased_group;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demographic fairness metrics for biometric verification scores"};
  app.require_subcommand(1);

  // evaluate
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compute fairness metrics on a score file");
  std::string eval_config_path, scores, polarity, eval_out, eval_format;
  OptionFlags eval_flags;
  CLI::Option* eval_config_opt =
      evaluate->add_option("--config", eval_config_path, "JSON config; flags override it");
  CLI::Option* scores_opt =
      evaluate->add_option("--scores", scores, "Score file (CSV score,kind,group or JSON)");
  CLI::Option* polarity_opt =
      evaluate->add_option("--polarity", polarity, "similarity or distance");
  CLI::Option* eval_out_opt = evaluate->add_option("--out", eval_out, "Report file");
  CLI::Option* eval_format_opt =
      evaluate->add_option("--format", eval_format, "json (default) or markdown");
  eval_flags.Register(evaluate);

  // synth
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic score population");
  std::string synth_config_path, scenario, synth_out;
  double strength = 0.0;
  SpecFlags synth_flags;
  CLI::Option* synth_config_opt =
      synth->add_option("--config", synth_config_path, "Scenario JSON; flags override it");
  CLI::Option* scenario_opt = synth->add_option("--scenario", scenario, "clean, bg, bi or bc");
  CLI::Option* strength_opt = synth->add_option("--strength", strength, "Bias strength");
  synth->add_option("--out", synth_out, "CSV output path")->required();
  synth_flags.Register(synth);

  // table1
  CLI::App* table1 =
      app.add_subcommand("table1", "Evaluate every metric on the BG, BI and BC scenarios");
  std::string table1_config_path, strengths, table1_out, table1_format = "markdown";
  OptionFlags table1_flags;
  SpecFlags table1_spec_flags;
  CLI::Option* table1_config_opt =
      table1->add_option("--config", table1_config_path, "JSON config; flags override it");
  CLI::Option* strengths_opt = table1->add_option(
      "--strength", strengths, "One strength for all scenarios or bg,bi,bc");
  table1->add_option("--out", table1_out, "Report file");
  table1->add_option("--format", table1_format, "markdown (default) or json");
  table1_flags.Register(table1);
  table1_spec_flags.Register(table1);

  // render
  CLI::App* render = app.add_subcommand("render", "Re-render a saved JSON report");
  std::string render_in, render_out, render_format = "markdown";
  render->add_option("input", render_in, "Report JSON")->required();
  render->add_option("--out", render_out, "Output file");
  render->add_option("--format", render_format, "markdown (default) or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cei::kExitUsage;
  }

  try {
    if (*evaluate) {
      cei::EvalConfig config;
      if (*eval_config_opt) config = cei::ParseEvalConfigJson(ReadText(eval_config_path));
      if (*scores_opt) config.scores_path = scores;
      if (*polarity_opt) {
        config.polarity = cei::ParsePolarity(polarity);
        if (!config.polarity) {
          throw cei::Error(cei::ErrorCode::kInvalidConfig, "cli-report",
                           "unknown polarity '" + polarity + "'");
        }
      }
      if (*eval_out_opt) config.output = eval_out;
      if (*eval_format_opt) config.format = FormatOrThrow(eval_format);
      eval_flags.Apply(config.options);
      return cei::RunEvaluate(config, std::cout, std::cerr);
    }
    if (*synth) {
      cei::ScenarioSpec spec;
      if (*synth_config_opt) spec = cei::ParseScenarioSpecJson(ReadText(synth_config_path));
      if (*scenario_opt) {
        const auto parsed = cei::ParseScenario(scenario);
        if (!parsed) {
          throw cei::Error(cei::ErrorCode::kInvalidSpec, "synthetic",
                           "unknown scenario '" + scenario + "' (clean, bg, bi or bc)");
        }
        spec.scenario = *parsed;
      }
      if (*strength_opt) spec.strength = strength;
      synth_flags.Apply(spec);
      return cei::RunSynth(spec, synth_out, std::cout, std::cerr);
    }
    if (*table1) {
      cei::Table1Config config;
      if (*table1_config_opt) {
        config = cei::ParseTable1ConfigJson(ReadText(table1_config_path));
      }
      if (*strengths_opt) {
        const std::vector<double> s = cei::ParsePercentileList(strengths);
        if (s.size() == 1) {
          config.strengths = {s[0], s[0], s[0]};
        } else if (s.size() == 3) {
          config.strengths = {s[0], s[1], s[2]};
        } else {
          throw cei::Error(cei::ErrorCode::kInvalidConfig, "cli-report",
                           "--strength takes one value or bg,bi,bc");
        }
      }
      table1_flags.Apply(config.options);
      table1_spec_flags.Apply(config.base);
      return cei::RunTable1Command(config, FormatOrThrow(table1_format), table1_out, std::cout,
                                   std::cerr);
    }
    if (*render) {
      return cei::RunRender(render_in, FormatOrThrow(render_format), render_out, std::cout,
                            std::cerr);
    }
  } catch (const cei::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cei::kExitUsage;
  }
  return cei::kExitUsage;
}
