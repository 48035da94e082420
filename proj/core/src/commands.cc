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

#include "cei/commands.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <system_error>

#include "cei/error.h"
#include "cei/error_rates.h"
#include "json.hpp"

namespace cei {
namespace {

constexpr std::string_view kModule = "cli-report";

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, kModule, message);
}

json ParseJsonText(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Invalid(std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, kModule, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes through a sibling temporary so a failed run never leaves a
// truncated file behind.
void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, kModule, "cannot write " + path.string());
    out << text;
    if (!out.flush()) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIoError, kModule, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, kModule, "cannot write " + path.string());
  }
}

template <typename T>
T Get(const json& j, std::string_view key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    Invalid("config key '" + std::string(key) + "' has the wrong type");
  }
}

std::vector<WeightPair> WeightsFromJson(const json& j) {
  if (!j.is_array()) Invalid("config key 'weights' must be a list of [tail, center] pairs");
  std::vector<WeightPair> out;
  for (const json& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      Invalid("config key 'weights' must be a list of [tail, center] pairs");
    }
    out.push_back({Get<double>(pair[0], "weights"), Get<double>(pair[1], "weights")});
  }
  return out;
}

// Applies an evaluation-option key. Returns false when key is not one.
bool ApplyOptionKey(const std::string& key, const json& value, EvalOptions& o) {
  if (key == "bins") {
    o.num_bins = Get<std::size_t>(value, key);
  } else if (key == "smoothing") {
    o.smoothing = Get<double>(value, key);
  } else if (key == "target_fmr") {
    if (value.is_null()) {
      o.target_fmr.reset();
    } else {
      o.target_fmr = Get<double>(value, key);
    }
  } else if (key == "percentiles") {
    o.percentiles = Get<std::vector<double>>(value, key);
  } else if (key == "weights") {
    o.weight_sets = WeightsFromJson(value);
  } else if (key == "metrics") {
    const auto sel = ParseMetricSelection(Get<std::string>(value, key));
    if (!sel) Invalid("unknown metric selection '" + value.dump() + "'");
    o.metrics = *sel;
  } else if (key == "threshold_source") {
    const auto source = ParseThresholdSource(Get<std::string>(value, key));
    if (!source) Invalid("unknown threshold_source " + value.dump());
    o.threshold_source = *source;
  } else if (key == "min_per_cell") {
    o.min_per_cell = Get<std::size_t>(value, key);
  } else if (key == "allow_unnormalized_weights") {
    o.allow_unnormalized_weights = Get<bool>(value, key);
  } else {
    return false;
  }
  return true;
}

OutputFormat FormatFromJson(const json& value) {
  const auto format = ParseOutputFormat(Get<std::string>(value, "format"));
  if (!format) Invalid("unknown format " + value.dump());
  return *format;
}

std::string Fixed(double x, int digits = 4) {
  if (std::isnan(x)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string Compact(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

double ValueOr(const MetricValue& v) {
  return v.value.value_or(std::numeric_limits<double>::quiet_NaN());
}

const MetricReport* Find(const std::vector<LabelledReport>& reports, std::string_view label) {
  for (const auto& [name, report] : reports) {
    if (name == label) return &report;
  }
  return nullptr;
}

struct ScenarioColumn {
  const char* label;
  Scenario scenario;
};

constexpr std::array<ScenarioColumn, 3> kColumns{{
    {"BG", Scenario::kBiasedGenuineTail},
    {"BI", Scenario::kBiasedImpostorTail},
    {"BC", Scenario::kBiasedCenters},
}};

ojson ToOrdered(const std::string& text) { return ojson::parse(text); }

}  // namespace

std::string_view OutputFormatName(OutputFormat format) {
  return format == OutputFormat::kJson ? "json" : "markdown";
}

std::optional<OutputFormat> ParseOutputFormat(std::string_view text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "markdown" || text == "md") return OutputFormat::kMarkdown;
  return std::nullopt;
}

void EvalConfig::Validate() const {
  if (scores_path.empty()) Invalid("no scores file given");
  if (!polarity) Invalid("polarity is required (similarity or distance)");
  options.Validate();
}

EvalConfig ParseEvalConfigJson(std::string_view text, EvalConfig base) {
  const json doc = ParseJsonText(text, "evaluate config");
  if (!doc.is_object()) Invalid("evaluate config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (ApplyOptionKey(key, value, base.options)) continue;
    if (key == "scores") {
      base.scores_path = Get<std::string>(value, key);
    } else if (key == "polarity") {
      const auto polarity = ParsePolarity(Get<std::string>(value, key));
      if (!polarity) Invalid("unknown polarity " + value.dump());
      base.polarity = *polarity;
    } else if (key == "out") {
      base.output = Get<std::string>(value, key);
    } else if (key == "format") {
      base.format = FormatFromJson(value);
    } else {
      Invalid("unknown config key '" + key + "'");
    }
  }
  return base;
}

std::vector<double> ParsePercentileList(std::string_view text) {
  std::vector<double> out;
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      Invalid("bad percentile '" + item + "'");
    }
  }
  if (out.empty()) Invalid("empty percentile list");
  return out;
}

std::vector<WeightPair> ParseWeightList(std::string_view text) {
  std::vector<WeightPair> out;
  std::stringstream in{std::string(text)};
  std::string pair;
  while (std::getline(in, pair, ';')) {
    const std::vector<double> values = [&] {
      try {
        return ParsePercentileList(pair);
      } catch (const Error&) {
        Invalid("bad weight pair '" + pair + "'");
      }
    }();
    if (values.size() != 2) Invalid("weight pair '" + pair + "' must be 'tail,center'");
    out.push_back({values[0], values[1]});
  }
  if (out.empty()) Invalid("empty weight list");
  return out;
}

ScoreSet LoadScores(const std::filesystem::path& path, Polarity polarity) {
  if (path.extension() == ".json") return IngestJson(path, polarity);
  return IngestCsv(path, polarity);
}

int RunEvaluate(const EvalConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate();
    const ScoreSet set = LoadScores(config.scores_path, *config.polarity);
    const MetricReport report = EvaluateAll(set, config.options, config.scores_path.string());
    const std::string text = config.format == OutputFormat::kJson
                                 ? RenderReportJson(report)
                                 : RenderReportMarkdown(report);
    if (config.output.empty()) {
      out << text;
    } else {
      WriteFile(config.output, text);
      out << RenderMetricTable({{"value", report}});
      out << "report written to " << config.output.string() << "\n";
    }
    for (const std::string& flag : report.validation_flags) err << "warning: " << flag << "\n";
    for (const MetricFailure& f : report.failures) {
      err << "error: " << f.metric << " [" << f.module << "] " << f.code << ": " << f.message
          << "\n";
    }
    return report.ok() ? kExitOk : kExitMetricFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

std::string SummarizeScores(const ScoreSet& set, double threshold) {
  std::ostringstream out;
  out << "| Group | Kind | n | mean | error-side mass at " << Compact(threshold) << " |\n"
      << "|---|---|---|---|---|\n";
  const GroupScores genuine = Partition(set, Kind::kGenuine);
  const GroupScores impostor = Partition(set, Kind::kImpostor);
  for (const std::string& group : set.groups()) {
    for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
      const std::vector<double>& scores = (kind == Kind::kGenuine ? genuine : impostor).at(group);
      std::string mean = "n/a";
      std::string mass = "n/a";
      if (!scores.empty()) {
        mean = Fixed(std::accumulate(scores.begin(), scores.end(), 0.0) /
                     static_cast<double>(scores.size()));
        const double m = kind == Kind::kGenuine ? FnmrAt(scores, threshold, set.polarity())
                                                : FmrAt(scores, threshold, set.polarity());
        mass = Fixed(m, 6);
      }
      out << "| " << group << " | " << KindName(kind) << " | " << scores.size() << " | "
          << mean << " | " << mass << " |\n";
    }
  }
  return out.str();
}

int RunSynth(const ScenarioSpec& spec, const std::filesystem::path& path, std::ostream& out,
             std::ostream& err) {
  try {
    if (path.empty()) Invalid("synth needs an output path (--out)");
    spec.Validate();
    const ScoreSet set = Generate(spec);
    ExportCsv(set, path);
    out << "scenario " << ScenarioName(spec.scenario) << ", strength " << Compact(spec.strength)
        << ", seed " << spec.seed << ", biased group " << spec.BiasedGroup() << "\n";
    out << SummarizeScores(set, ReferenceOperatingThreshold(spec));
    out << "wrote " << set.size() << " rows to " << path.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

Table1Config::Table1Config() {
  options.target_fmr = 3e-3;
  options.percentiles = {75.0, 90.0, 95.0};
  options.weight_sets = {{0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2}};
}

bool Table1Config::null_case() const {
  return strengths[0] == 0.0 && strengths[1] == 0.0 && strengths[2] == 0.0;
}

Table1Config ParseTable1ConfigJson(std::string_view text, Table1Config base) {
  const json doc = ParseJsonText(text, "table1 config");
  if (!doc.is_object()) Invalid("table1 config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (ApplyOptionKey(key, value, base.options)) continue;
    if (key == "spec") {
      // Keys absent from the nested object keep the defaults of the parser,
      // so merge onto the current base explicitly.
      json merged = ParseJsonText(ScenarioSpecToJson(base.base), "spec");
      if (!value.is_object()) Invalid("config key 'spec' must be an object");
      for (const auto& [k, v] : value.items()) merged[k] = v;
      base.base = ParseScenarioSpecJson(merged.dump());
    } else if (key == "strengths") {
      const auto s = Get<std::vector<double>>(value, key);
      if (s.size() == 1) {
        base.strengths = {s[0], s[0], s[0]};
      } else if (s.size() == 3) {
        base.strengths = {s[0], s[1], s[2]};
      } else {
        Invalid("config key 'strengths' needs 1 or 3 values");
      }
    } else {
      Invalid("unknown config key '" + key + "'");
    }
  }
  return base;
}

bool PatternCheck::pass() const {
  if (lines.empty()) return false;
  for (const PatternLine& line : lines) {
    if (!line.pass) return false;
  }
  return true;
}

PatternCheck CheckTable1Pattern(const std::vector<LabelledReport>& reports,
                                const HeadlineCei& headline, bool null_case, double fair_tol) {
  PatternCheck check;
  check.null_case = null_case;
  const MetricReport* bg = Find(reports, "BG");
  const MetricReport* bi = Find(reports, "BI");
  const MetricReport* bc = Find(reports, "BC");
  if (!bg || !bi || !bc) {
    check.lines.push_back({"reports present", false, "expected BG, BI and BC reports"});
    return check;
  }
  if (null_case) {
    bool fair = true;
    std::string detail = "every value within " + Compact(fair_tol) + " of its fair point";
    for (const auto& [label, r] : reports) {
      if (!r.ok() || !AtFairPoint(r, fair_tol)) {
        fair = false;
        detail = label + " deviates from the fair point";
        break;
      }
    }
    check.lines.push_back({"no bias detected anywhere", fair, detail});
    return check;
  }

  const auto cei = [&](const MetricReport& r, Kind kind, Variant variant) {
    const CeiCell* cell = r.FindCei(headline.percentile, headline.weights);
    if (!cell) return std::numeric_limits<double>::quiet_NaN();
    const CeiKindResult& k = cell->ForKind(kind);
    return ValueOr(variant == Variant::kNormal ? k.normal : k.extreme);
  };
  const auto add = [&](std::string name, bool pass, std::string detail) {
    check.lines.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    const double v[4] = {ValueOr(bg->dfi_n), ValueOr(bg->dfi_e), ValueOr(bi->dfi_n),
                         ValueOr(bi->dfi_e)};
    bool pass = true;
    for (double x : v) pass = pass && x >= 0.99;
    add("DFI misses tail bias: DFI_N, DFI_E >= 0.99 on BG and BI", pass,
        "BG " + Fixed(v[0]) + "/" + Fixed(v[1]) + ", BI " + Fixed(v[2]) + "/" + Fixed(v[3]));
  }
  {
    const double n = ValueOr(bc->dfi_n);
    const double e = ValueOr(bc->dfi_e);
    add("DFI detects center shift: DFI_N, DFI_E <= 0.90 on BC", n <= 0.90 && e <= 0.90,
        "BC " + Fixed(n) + "/" + Fixed(e));
  }
  {
    const double a = ValueOr(bg->garbe_fnmr);
    const double b = ValueOr(bi->garbe_fnmr);
    add("GARBE_FNMR(BG) >= 5 x GARBE_FNMR(BI)", a >= 5.0 * b, Fixed(a) + " vs " + Fixed(b));
  }
  {
    const double a = ValueOr(bi->garbe_fmr);
    const double b = ValueOr(bg->garbe_fmr);
    add("GARBE_FMR(BI) >= 5 x GARBE_FMR(BG)", a >= 5.0 * b, Fixed(a) + " vs " + Fixed(b));
  }
  {
    const double hit = ValueOr(bg->in_fnmr);
    const double other = ValueOr(bg->in_fmr);
    add("IN_FNMR(BG) >= 1.5 while IN_FMR(BG) <= 1.1", hit >= 1.5 && other <= 1.1,
        Fixed(hit) + ", " + Fixed(other));
  }
  {
    const double hit = ValueOr(bi->in_fmr);
    const double other = ValueOr(bi->in_fnmr);
    add("IN_FMR(BI) >= 1.5 while IN_FNMR(BI) <= 1.1", hit >= 1.5 && other <= 1.1,
        Fixed(hit) + ", " + Fixed(other));
  }
  const std::string at = "P" + Compact(headline.percentile) + ", w=(" +
                         Compact(headline.weights.tail) + ", " +
                         Compact(headline.weights.center) + ")";
  const auto tail_line = [&](const char* label, const MetricReport& r, Kind biased) {
    const Kind other = biased == Kind::kGenuine ? Kind::kImpostor : Kind::kGenuine;
    const double hit_n = cei(r, biased, Variant::kNormal);
    const double hit_e = cei(r, biased, Variant::kExtreme);
    const double other_n = cei(r, other, Variant::kNormal);
    const double other_e = cei(r, other, Variant::kExtreme);
    const bool pass = hit_n <= 0.90 && hit_e <= 0.90 && other_n >= 0.99 && other_e >= 0.99;
    add(std::string("CEI localizes ") + label + " (" + at + "): " +
            std::string(KindName(biased)) + " <= 0.90, " + std::string(KindName(other)) +
            " >= 0.99",
        pass,
        "N/E " + Fixed(hit_n) + "/" + Fixed(hit_e) + " vs " + Fixed(other_n) + "/" +
            Fixed(other_e));
  };
  tail_line("BG", *bg, Kind::kGenuine);
  tail_line("BI", *bi, Kind::kImpostor);
  {
    const double target = cei(*bc, Kind::kImpostor, Variant::kNormal);
    double lowest = std::numeric_limits<double>::infinity();
    for (const MetricReport* r : {bg, bi, bc}) {
      for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
        lowest = std::min(lowest, cei(*r, kind, Variant::kNormal));
      }
    }
    add("CEI_N impostor on BC is the minimum CEI_N cell (" + at + ")", target <= lowest,
        Fixed(target) + " (minimum " + Fixed(lowest) + ")");
  }
  for (const auto& [label, r] : reports) {
    if (!r.ok()) add(label + " computed without metric failures", false,
                     std::to_string(r.failures.size()) + " failures");
  }
  return check;
}

Table1Result RunTable1(const Table1Config& config) {
  config.base.Validate();
  config.options.Validate();
  Table1Result result;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    ScenarioSpec spec = config.base;
    spec.scenario = kColumns[i].scenario;
    spec.strength = config.strengths[i];
    const ScoreSet set = Generate(spec);
    MetricReport report = EvaluateAll(set, config.options,
                                      std::string("synthetic:") +
                                          std::string(ScenarioName(spec.scenario)) +
                                          ", strength " + Compact(spec.strength));
    report.config.seed = spec.seed;
    result.reports.emplace_back(kColumns[i].label, std::move(report));
  }
  result.check = CheckTable1Pattern(result.reports, config.headline, config.null_case());
  return result;
}

std::string RenderTable1Markdown(const Table1Result& result, const Table1Config& config) {
  const ScenarioSpec& s = config.base;
  std::ostringstream out;
  out << "# Synthetic bias scenarios\n\n";
  out << "- seed: " << s.seed << ", groups:";
  for (const std::string& g : s.groups) out << " " << g;
  out << " (biased: " << s.BiasedGroup() << ")\n";
  out << "- per group: " << s.n_genuine << " genuine, " << s.n_impostor << " impostor\n";
  out << "- strengths: BG " << Compact(config.strengths[0]) << ", BI "
      << Compact(config.strengths[1]) << ", BC " << Compact(config.strengths[2]) << "\n";
  out << "- bins: " << config.options.num_bins << ", smoothing: "
      << Compact(config.options.smoothing);
  if (config.options.target_fmr) out << ", target FMR: " << Compact(*config.options.target_fmr);
  out << "\n";
  for (const auto& [label, r] : result.reports) {
    if (r.config.threshold) {
      out << "- " << label << " threshold: " << Compact(*r.config.threshold)
          << ", achieved FMR: " << Compact(r.config.achieved_fmr.value_or(0.0)) << "\n";
    }
  }
  out << "\n## Metrics (CEI at P" << Compact(config.headline.percentile) << ", w=("
      << Compact(config.headline.weights.tail) << ", " << Compact(config.headline.weights.center)
      << "))\n\n";
  out << RenderMetricTable(result.reports, config.headline) << "\n";
  const std::string sweep = RenderCeiSweepTable(result.reports);
  if (!sweep.empty()) out << "## CEI_N sweep\n\n" << sweep << "\n";
  out << "## Pattern check\n\n";
  for (const PatternLine& line : result.check.lines) {
    out << (line.pass ? "PASS" : "FAIL") << "  " << line.name << "  [" << line.detail << "]\n";
  }
  out << "\nOverall: " << (result.check.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string RenderTable1Json(const Table1Result& result, const Table1Config& config) {
  ojson reports = ojson::array();
  for (const auto& [label, r] : result.reports) {
    reports.push_back({{"label", label}, {"report", ToOrdered(RenderReportJson(r))}});
  }
  ojson lines = ojson::array();
  for (const PatternLine& line : result.check.lines) {
    lines.push_back({{"name", line.name}, {"pass", line.pass}, {"detail", line.detail}});
  }
  const ojson doc = {
      {"schema_version", kReportSchemaVersion},
      {"report_type", "table1"},
      {"spec", ToOrdered(ScenarioSpecToJson(config.base))},
      {"strengths", config.strengths},
      {"headline",
       {{"percentile", config.headline.percentile},
        {"weights", {config.headline.weights.tail, config.headline.weights.center}}}},
      {"reports", reports},
      {"pattern_check",
       {{"null_case", result.check.null_case}, {"pass", result.check.pass()}, {"lines", lines}}},
  };
  return doc.dump(2) + "\n";
}

int RunTable1Command(const Table1Config& config, OutputFormat format,
                     const std::filesystem::path& output, std::ostream& out, std::ostream& err) {
  try {
    const Table1Result result = RunTable1(config);
    const std::string markdown = RenderTable1Markdown(result, config);
    const std::string text =
        format == OutputFormat::kJson ? RenderTable1Json(result, config) : markdown;
    if (output.empty()) {
      out << text;
    } else {
      WriteFile(output, text);
      out << markdown;
      out << "report written to " << output.string() << "\n";
    }
    if (!result.check.pass()) err << "table1 pattern check failed\n";
    return result.check.pass() ? kExitOk : kExitMetricFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int RunRender(const std::filesystem::path& input, OutputFormat format,
              const std::filesystem::path& output, std::ostream& out, std::ostream& err) {
  try {
    const std::string text = ReadFile(input);
    const json doc = ParseJsonText(text, input.string());
    const std::string type = doc.value("report_type", std::string());
    std::string rendered;
    if (type == "metric_report") {
      const MetricReport report = ParseReportJson(text);
      rendered = format == OutputFormat::kJson ? RenderReportJson(report)
                                               : RenderReportMarkdown(report);
    } else if (type == "table1") {
      Table1Config config;
      config.base = ParseScenarioSpecJson(doc.at("spec").dump());
      const auto strengths = doc.at("strengths").get<std::vector<double>>();
      if (strengths.size() != 3) Invalid("table1 document needs 3 strengths");
      config.strengths = {strengths[0], strengths[1], strengths[2]};
      const json& h = doc.at("headline");
      config.headline = {h.at("percentile").get<double>(),
                         {h.at("weights").at(0).get<double>(), h.at("weights").at(1).get<double>()}};
      Table1Result result;
      for (const json& entry : doc.at("reports")) {
        result.reports.emplace_back(entry.at("label").get<std::string>(),
                                    ParseReportJson(entry.at("report").dump()));
      }
      if (!result.reports.empty()) config.options = result.reports.front().second.config.options;
      result.check = CheckTable1Pattern(result.reports, config.headline, config.null_case());
      rendered = format == OutputFormat::kJson ? RenderTable1Json(result, config)
                                               : RenderTable1Markdown(result, config);
    } else {
      Invalid("unknown report_type '" + type + "'");
    }
    if (output.empty()) {
      out << rendered;
    } else {
      WriteFile(output, rendered);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: malformed report: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cei
