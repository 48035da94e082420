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

// Subcommand drivers behind the cei binary. Each Run* function takes its
// streams explicitly so tests can call it in-process; all files are written
// once, after every computation has succeeded.

#ifndef CEI_COMMANDS_H_
#define CEI_COMMANDS_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cei/fairness_metrics.h"
#include "cei/report.h"
#include "cei/synthetic.h"

namespace cei {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMetricFailure = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { kJson, kMarkdown };

std::string_view OutputFormatName(OutputFormat format);
std::optional<OutputFormat> ParseOutputFormat(std::string_view text);

struct EvalConfig {
  std::filesystem::path scores_path;
  std::optional<Polarity> polarity;
  EvalOptions options;
  // Empty: the report goes to the output stream.
  std::filesystem::path output;
  OutputFormat format = OutputFormat::kJson;

  // Throws InvalidConfig.
  void Validate() const;
};

// Overlays the keys of a JSON config object onto base. Keys: scores,
// polarity, bins, smoothing, target_fmr, percentiles, weights ([[t, c], ...]),
// metrics, threshold_source, min_per_cell, allow_unnormalized_weights, out,
// format. Unknown keys are rejected.
EvalConfig ParseEvalConfigJson(std::string_view text, EvalConfig base = {});

// Parses "75,90,95" and "0.5,0.5;0.8,0.2". Throw InvalidConfig.
std::vector<double> ParsePercentileList(std::string_view text);
std::vector<WeightPair> ParseWeightList(std::string_view text);

// Score files ending in .json are read as JSON, anything else as CSV.
ScoreSet LoadScores(const std::filesystem::path& path, Polarity polarity);

// Exit 0 when every requested metric was computed, 1 when the report lists
// failures (the report is still written), 2 on config or ingestion errors
// (nothing is written).
int RunEvaluate(const EvalConfig& config, std::ostream& out, std::ostream& err);

// Per-group counts, means and error-side masses at the reference operating
// threshold.
std::string SummarizeScores(const ScoreSet& set, double threshold);

int RunSynth(const ScenarioSpec& spec, const std::filesystem::path& path,
             std::ostream& out, std::ostream& err);

struct Table1Config {
  // scenario and strength are overridden per column.
  ScenarioSpec base;
  // Bias strengths for BG, BI and BC.
  std::array<double, 3> strengths{0.05, 0.04, 1.0};
  EvalOptions options;
  HeadlineCei headline;

  Table1Config();
  bool null_case() const;
};

// Top-level keys: spec (ScenarioSpec object), strengths ([bg, bi, bc]) and
// the evaluation keys of ParseEvalConfigJson except scores, polarity and out.
Table1Config ParseTable1ConfigJson(std::string_view text, Table1Config base = {});

struct PatternLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PatternCheck {
  bool null_case = false;
  std::vector<PatternLine> lines;

  bool pass() const;
};

// Directional checks on BG, BI and BC reports (labels "BG", "BI", "BC"). In
// the null case a single line asserts every value is at its fair point
// within fair_tol.
PatternCheck CheckTable1Pattern(const std::vector<LabelledReport>& reports,
                                const HeadlineCei& headline, bool null_case,
                                double fair_tol = 0.02);

struct Table1Result {
  std::vector<LabelledReport> reports;
  PatternCheck check;
};

Table1Result RunTable1(const Table1Config& config);

std::string RenderTable1Markdown(const Table1Result& result, const Table1Config& config);
std::string RenderTable1Json(const Table1Result& result, const Table1Config& config);

// Exit 0 when the pattern check passes and no metric failed, 1 otherwise.
int RunTable1Command(const Table1Config& config, OutputFormat format,
                     const std::filesystem::path& output, std::ostream& out,
                     std::ostream& err);

// Re-renders a JSON document written by evaluate or table1.
int RunRender(const std::filesystem::path& input, OutputFormat format,
              const std::filesystem::path& output, std::ostream& out, std::ostream& err);

}  // namespace cei

#endif  // CEI_COMMANDS_H_
