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

#include "cei/report.h"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "cei/error.h"
#include "json.hpp"

namespace cei {
namespace {

constexpr std::string_view kModule = "cli-report";

using ojson = nlohmann::ordered_json;

template <typename T>
ojson Nullable(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> ReadNullable(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

ojson ValueToJson(const MetricValue& v) {
  return {{"value", Nullable(v.value)}, {"flags", v.flags}};
}

MetricValue ValueFromJson(const nlohmann::json& j) {
  MetricValue v;
  v.value = ReadNullable<double>(j, "value");
  v.flags = j.at("flags").get<std::vector<std::string>>();
  return v;
}

ojson KindToJson(const CeiKindResult& r) {
  return {{"normal", ValueToJson(r.normal)},
          {"extreme", ValueToJson(r.extreme)},
          {"threshold", Nullable(r.threshold)}};
}

CeiKindResult KindFromJson(const nlohmann::json& j) {
  return {ValueFromJson(j.at("normal")), ValueFromJson(j.at("extreme")),
          ReadNullable<double>(j, "threshold")};
}

std::string Fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string Compact(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

std::string WeightLabel(const WeightPair& w) {
  return "(" + Compact(w.tail) + ", " + Compact(w.center) + ")";
}

// Rows are separated by a single "|"-delimited line each.
std::string Row(const std::vector<std::string>& cells) {
  std::string line = "|";
  for (const std::string& c : cells) line += " " + c + " |";
  return line + "\n";
}

std::string Rule(std::size_t columns) {
  std::string line = "|";
  for (std::size_t i = 0; i < columns; ++i) line += "---|";
  return line + "\n";
}

}  // namespace

std::string RenderReportJson(const MetricReport& r) {
  const EvalOptions& o = r.config.options;
  ojson weights = ojson::array();
  for (const WeightPair& w : o.weight_sets) weights.push_back({w.tail, w.center});
  ojson counts = ojson::array();
  for (const CellCount& c : r.config.counts) {
    counts.push_back({{"group", c.group}, {"genuine", c.genuine}, {"impostor", c.impostor}});
  }
  ojson config = {
      {"source", r.config.source},
      {"polarity", PolarityName(r.config.polarity)},
      {"bins", o.num_bins},
      {"smoothing", o.smoothing},
      {"target_fmr", Nullable(o.target_fmr)},
      {"percentiles", o.percentiles},
      {"weights", weights},
      {"metrics", MetricSelectionName(o.metrics)},
      {"threshold_source", ThresholdSourceName(o.threshold_source)},
      {"min_per_cell", o.min_per_cell},
      {"allow_unnormalized_weights", o.allow_unnormalized_weights},
      {"threshold", Nullable(r.config.threshold)},
      {"achieved_fmr", Nullable(r.config.achieved_fmr)},
      {"counts", counts},
      {"seed", Nullable(r.config.seed)},
  };
  ojson rates = ojson::array();
  for (const GroupRates& g : r.group_rates) {
    rates.push_back({{"group", g.group},
                     {"fmr", Nullable(g.fmr)},
                     {"fnmr", Nullable(g.fnmr)},
                     {"n_impostor", g.n_impostor},
                     {"n_genuine", g.n_genuine},
                     {"false_matches", g.false_matches},
                     {"false_non_matches", g.false_non_matches}});
  }
  ojson cei = ojson::array();
  for (const CeiCell& c : r.cei) {
    cei.push_back({{"percentile", c.percentile},
                   {"weights", {{"tail", c.weights.tail}, {"center", c.weights.center}}},
                   {"genuine", KindToJson(c.genuine)},
                   {"impostor", KindToJson(c.impostor)}});
  }
  ojson failures = ojson::array();
  for (const MetricFailure& f : r.failures) {
    failures.push_back({{"metric", f.metric},
                        {"module", f.module},
                        {"code", f.code},
                        {"message", f.message}});
  }
  ojson doc = {
      {"schema_version", r.schema_version},
      {"report_type", "metric_report"},
      {"config", config},
      {"metrics",
       {{"dfi_n", ValueToJson(r.dfi_n)},
        {"dfi_e", ValueToJson(r.dfi_e)},
        {"garbe_fmr", ValueToJson(r.garbe_fmr)},
        {"garbe_fnmr", ValueToJson(r.garbe_fnmr)},
        {"in_fmr", ValueToJson(r.in_fmr)},
        {"in_fnmr", ValueToJson(r.in_fnmr)}}},
      {"group_rates", rates},
      {"cei", cei},
      {"validation_flags", r.validation_flags},
      {"failures", failures},
  };
  return doc.dump(2) + "\n";
}

MetricReport ParseReportJson(std::string_view text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    MetricReport r;
    r.schema_version = doc.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw Error(ErrorCode::kInvalidConfig, kModule,
                  "unsupported report schema_version " + std::to_string(r.schema_version));
    }
    const auto& c = doc.at("config");
    r.config.source = c.at("source").get<std::string>();
    const auto polarity = ParsePolarity(c.at("polarity").get<std::string>());
    if (!polarity) throw Error(ErrorCode::kInvalidConfig, kModule, "bad polarity");
    r.config.polarity = *polarity;
    EvalOptions& o = r.config.options;
    o.num_bins = c.at("bins").get<std::size_t>();
    o.smoothing = c.at("smoothing").get<double>();
    o.target_fmr = ReadNullable<double>(c, "target_fmr");
    o.percentiles = c.at("percentiles").get<std::vector<double>>();
    o.weight_sets.clear();
    for (const auto& w : c.at("weights")) {
      o.weight_sets.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
    }
    const auto sel = ParseMetricSelection(c.at("metrics").get<std::string>());
    if (!sel) throw Error(ErrorCode::kInvalidConfig, kModule, "bad metric selection");
    o.metrics = *sel;
    const auto source = ParseThresholdSource(c.at("threshold_source").get<std::string>());
    if (!source) throw Error(ErrorCode::kInvalidConfig, kModule, "bad threshold source");
    o.threshold_source = *source;
    o.min_per_cell = c.at("min_per_cell").get<std::size_t>();
    o.allow_unnormalized_weights = c.at("allow_unnormalized_weights").get<bool>();
    r.config.threshold = ReadNullable<double>(c, "threshold");
    r.config.achieved_fmr = ReadNullable<double>(c, "achieved_fmr");
    for (const auto& cc : c.at("counts")) {
      r.config.counts.push_back({cc.at("group").get<std::string>(),
                                 cc.at("genuine").get<std::size_t>(),
                                 cc.at("impostor").get<std::size_t>()});
    }
    r.config.seed = ReadNullable<std::uint64_t>(c, "seed");

    const auto& m = doc.at("metrics");
    r.dfi_n = ValueFromJson(m.at("dfi_n"));
    r.dfi_e = ValueFromJson(m.at("dfi_e"));
    r.garbe_fmr = ValueFromJson(m.at("garbe_fmr"));
    r.garbe_fnmr = ValueFromJson(m.at("garbe_fnmr"));
    r.in_fmr = ValueFromJson(m.at("in_fmr"));
    r.in_fnmr = ValueFromJson(m.at("in_fnmr"));
    for (const auto& g : doc.at("group_rates")) {
      GroupRates rates;
      rates.group = g.at("group").get<std::string>();
      rates.fmr = ReadNullable<double>(g, "fmr");
      rates.fnmr = ReadNullable<double>(g, "fnmr");
      rates.n_impostor = g.at("n_impostor").get<std::size_t>();
      rates.n_genuine = g.at("n_genuine").get<std::size_t>();
      rates.false_matches = g.at("false_matches").get<std::size_t>();
      rates.false_non_matches = g.at("false_non_matches").get<std::size_t>();
      r.group_rates.push_back(std::move(rates));
    }
    for (const auto& cell : doc.at("cei")) {
      CeiCell out;
      out.percentile = cell.at("percentile").get<double>();
      out.weights = {cell.at("weights").at("tail").get<double>(),
                     cell.at("weights").at("center").get<double>()};
      out.genuine = KindFromJson(cell.at("genuine"));
      out.impostor = KindFromJson(cell.at("impostor"));
      r.cei.push_back(std::move(out));
    }
    r.validation_flags = doc.at("validation_flags").get<std::vector<std::string>>();
    for (const auto& f : doc.at("failures")) {
      r.failures.push_back({f.at("metric").get<std::string>(), f.at("module").get<std::string>(),
                            f.at("code").get<std::string>(),
                            f.at("message").get<std::string>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, kModule,
                std::string("malformed report JSON: ") + e.what());
  }
}

std::string FormatMetric(const MetricValue& v) {
  if (!v.value) return "n/a";
  std::string s = Fixed(*v.value);
  for (const std::string& f : v.flags) {
    if (f == "clamped" || f == "rate_floor" || f == "zero_mean_rate") {
      s += "*";
      break;
    }
  }
  return s;
}

std::string RenderMetricTable(const std::vector<LabelledReport>& reports,
                              const HeadlineCei& headline) {
  struct RowSpec {
    std::string name;
    bool MetricSelection::*selected;
    std::function<MetricValue(const MetricReport&)> get;
  };
  const auto cei_value = [headline](Kind kind, Variant variant) {
    return [=](const MetricReport& r) {
      const CeiCell* cell = r.FindCei(headline.percentile, headline.weights);
      if (!cell) return MetricValue{};
      const CeiKindResult& k = cell->ForKind(kind);
      return variant == Variant::kNormal ? k.normal : k.extreme;
    };
  };
  const std::vector<RowSpec> rows = {
      {"DFI_N", &MetricSelection::dfi, [](const MetricReport& r) { return r.dfi_n; }},
      {"DFI_E", &MetricSelection::dfi, [](const MetricReport& r) { return r.dfi_e; }},
      {"GARBE_FMR", &MetricSelection::garbe, [](const MetricReport& r) { return r.garbe_fmr; }},
      {"GARBE_FNMR", &MetricSelection::garbe,
       [](const MetricReport& r) { return r.garbe_fnmr; }},
      {"IN_FMR", &MetricSelection::inequity, [](const MetricReport& r) { return r.in_fmr; }},
      {"IN_FNMR", &MetricSelection::inequity,
       [](const MetricReport& r) { return r.in_fnmr; }},
      {"CEI_N Genuine", &MetricSelection::cei, cei_value(Kind::kGenuine, Variant::kNormal)},
      {"CEI_N Impostor", &MetricSelection::cei, cei_value(Kind::kImpostor, Variant::kNormal)},
      {"CEI_E Genuine", &MetricSelection::cei, cei_value(Kind::kGenuine, Variant::kExtreme)},
      {"CEI_E Impostor", &MetricSelection::cei,
       cei_value(Kind::kImpostor, Variant::kExtreme)},
  };
  std::vector<std::string> header{"Metric"};
  for (const auto& [label, unused] : reports) header.push_back(label);
  std::string out = Row(header) + Rule(header.size());
  for (const RowSpec& spec : rows) {
    bool any = false;
    for (const auto& [label, r] : reports) any = any || r.config.options.metrics.*spec.selected;
    if (!any) continue;
    std::vector<std::string> cells{spec.name};
    for (const auto& [label, r] : reports) cells.push_back(FormatMetric(spec.get(r)));
    out += Row(cells);
  }
  return out;
}

std::string RenderCeiSweepTable(const std::vector<LabelledReport>& reports) {
  if (reports.empty() || reports.front().second.cei.empty()) return {};
  std::vector<std::string> header{"P", "w"};
  for (const char* kind : {"Genuine", "Impostor"}) {
    for (const auto& [label, unused] : reports) header.push_back(std::string(kind) + " " + label);
  }
  std::string out = Row(header) + Rule(header.size());
  const MetricReport& first = reports.front().second;
  for (const double p : first.config.options.percentiles) {
    bool first_in_group = true;
    for (const WeightPair& w : first.config.options.weight_sets) {
      std::vector<std::string> cells{first_in_group ? "P" + Compact(p) : "", WeightLabel(w)};
      first_in_group = false;
      for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
        for (const auto& [label, r] : reports) {
          const CeiCell* cell = r.FindCei(p, w);
          cells.push_back(cell ? FormatMetric(cell->ForKind(kind).normal) : "n/a");
        }
      }
      out += Row(cells);
    }
  }
  return out;
}

std::string RenderReportMarkdown(const MetricReport& r, const HeadlineCei& headline) {
  const EvalOptions& o = r.config.options;
  std::ostringstream out;
  out << "# Fairness report\n\n";
  out << "- source: " << (r.config.source.empty() ? "(in-memory)" : r.config.source) << "\n";
  out << "- polarity: " << PolarityName(r.config.polarity) << "\n";
  out << "- bins: " << o.num_bins << ", smoothing: " << Compact(o.smoothing)
      << ", CEI threshold source: " << ThresholdSourceName(o.threshold_source) << "\n";
  if (o.target_fmr) {
    out << "- target FMR: " << Compact(*o.target_fmr);
    if (r.config.threshold) out << ", threshold: " << Compact(*r.config.threshold);
    if (r.config.achieved_fmr) out << ", achieved FMR: " << Compact(*r.config.achieved_fmr);
    out << "\n";
  }
  if (r.config.seed) out << "- seed: " << *r.config.seed << "\n";
  out << "- groups:";
  for (const CellCount& c : r.config.counts) {
    out << " " << c.group << " (" << c.genuine << " genuine, " << c.impostor << " impostor)";
  }
  out << "\n\n";

  const std::string label = "value";
  out << "## Metrics\n\n";
  if (o.metrics.cei) {
    out << "CEI rows at P" << Compact(headline.percentile) << ", w="
        << WeightLabel(headline.weights) << ".\n\n";
  }
  out << RenderMetricTable({{label, r}}, headline) << "\n";

  if (!r.cei.empty()) {
    out << "## CEI_N sweep\n\n" << RenderCeiSweepTable({{label, r}}) << "\n";
  }
  if (!r.group_rates.empty()) {
    out << "## Group error rates\n\n";
    out << Row({"Group", "FMR", "FNMR", "n impostor", "n genuine"}) << Rule(5);
    for (const GroupRates& g : r.group_rates) {
      out << Row({g.group, g.fmr ? Compact(*g.fmr) : "undefined",
                  g.fnmr ? Compact(*g.fnmr) : "undefined", std::to_string(g.n_impostor),
                  std::to_string(g.n_genuine)});
    }
    out << "\n";
  }
  out << "`*` marks values that were clamped, rate-floored or defined by convention.\n";
  if (!r.validation_flags.empty()) {
    out << "\n## Validation flags\n\n";
    for (const std::string& f : r.validation_flags) out << "- " << f << "\n";
  }
  if (!r.failures.empty()) {
    out << "\n## Failures\n\n";
    for (const MetricFailure& f : r.failures) {
      out << "- " << f.metric << " (" << f.module << ", " << f.code << "): " << f.message
          << "\n";
    }
  }
  return out.str();
}

bool AtFairPoint(const MetricReport& r, double tol) {
  const auto near = [tol](const MetricValue& v, double fair) {
    return !v.value || std::abs(*v.value - fair) <= tol;
  };
  if (!near(r.dfi_n, 1.0) || !near(r.dfi_e, 1.0)) return false;
  if (!near(r.garbe_fmr, 0.0) || !near(r.garbe_fnmr, 0.0)) return false;
  if (!near(r.in_fmr, 1.0) || !near(r.in_fnmr, 1.0)) return false;
  for (const CeiCell& c : r.cei) {
    for (const Kind kind : {Kind::kGenuine, Kind::kImpostor}) {
      const CeiKindResult& k = c.ForKind(kind);
      if (!near(k.normal, 1.0) || !near(k.extreme, 1.0)) return false;
    }
  }
  return true;
}

}  // namespace cei
