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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <set>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/roots.hpp>

#include "cei/error.h"
#include "json.hpp"

namespace cei {
namespace {

constexpr std::string_view kModule = "synthetic";

const boost::math::normal& StandardNormal() {
  static const boost::math::normal n(0.0, 1.0);
  return n;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

enum class Stream : std::uint64_t { kBase = 1, kSelector = 2, kTail = 3 };

std::mt19937_64 SubStream(std::uint64_t seed, std::string_view group, Kind kind,
                          Stream stream) {
  std::uint64_t s = SplitMix64(seed);
  s = SplitMix64(s ^ Fnv1a(group));
  s = SplitMix64(s ^ (kind == Kind::kGenuine ? 0x67656eULL : 0x696d70ULL));
  s = SplitMix64(s ^ static_cast<std::uint64_t>(stream));
  return std::mt19937_64(s);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double OpenUnit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidSpec, kModule, message);
}

void ValidateLaw(const ScoreLaw& law, std::string_view name) {
  Require(std::isfinite(law.mean) && std::isfinite(law.stddev) && law.stddev > 0.0,
          std::string(name) + " law needs a finite mean and stddev > 0");
}

// Solves quantile(law(mean, sigma), level) == target for sigma.
double SolveSpread(double mean, double level, double target, std::string_view what) {
  const auto f = [&](double sigma) {
    return TruncatedNormalQuantile({mean, sigma}, level) - target;
  };
  double lo = 1e-4;
  double hi = 2.0;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  Require(std::signbit(f_lo) != std::signbit(f_hi),
          "cannot match the " + std::string(what) +
              " tail at the operating point; reduce strength or center_shift");
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  const double sigma = (a + b) / 2.0;
  Require(std::abs(f(sigma)) <= 1e-6,
          "spread solve for the " + std::string(what) + " law did not converge");
  return sigma;
}

void SampleKind(const ScoreLaw& base, const ScoreLaw& tail, double tail_weight,
                std::size_t n, std::uint64_t seed, const std::string& group, Kind kind,
                std::vector<ScoreRecord>& out) {
  auto base_rng = SubStream(seed, group, kind, Stream::kBase);
  std::optional<std::mt19937_64> selector;
  std::optional<std::mt19937_64> tail_rng;
  if (tail_weight > 0.0) {
    selector = SubStream(seed, group, kind, Stream::kSelector);
    tail_rng = SubStream(seed, group, kind, Stream::kTail);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double score = TruncatedNormalQuantile(base, OpenUnit(base_rng));
    if (selector) {
      // Both draws happen every time so raising the weight only converts
      // additional samples to the tail component.
      const double pick = OpenUnit(*selector);
      const double u_tail = OpenUnit(*tail_rng);
      if (pick < tail_weight) score = TruncatedNormalQuantile(tail, u_tail);
    }
    out.push_back({score, kind, group});
  }
}

nlohmann::json LawToJson(const ScoreLaw& law) {
  return {{"mean", law.mean}, {"stddev", law.stddev}};
}

ScoreLaw LawFromJson(const nlohmann::json& j, std::string_view name) {
  Require(j.is_object(), std::string(name) + " must be an object {mean, stddev}");
  ScoreLaw law;
  for (const auto& [key, value] : j.items()) {
    Require(key == "mean" || key == "stddev",
            "unknown field " + std::string(name) + "." + key);
    Require(value.is_number(), std::string(name) + "." + key + " must be a number");
  }
  if (j.contains("mean")) law.mean = j["mean"].get<double>();
  if (j.contains("stddev")) law.stddev = j["stddev"].get<double>();
  return law;
}

}  // namespace

std::string_view ScenarioName(Scenario scenario) {
  switch (scenario) {
    case Scenario::kClean: return "clean";
    case Scenario::kBiasedGenuineTail: return "bg";
    case Scenario::kBiasedImpostorTail: return "bi";
    case Scenario::kBiasedCenters: return "bc";
  }
  return "clean";
}

std::optional<Scenario> ParseScenario(std::string_view text) {
  if (text == "clean") return Scenario::kClean;
  if (text == "bg") return Scenario::kBiasedGenuineTail;
  if (text == "bi") return Scenario::kBiasedImpostorTail;
  if (text == "bc") return Scenario::kBiasedCenters;
  return std::nullopt;
}

const std::string& ScenarioSpec::BiasedGroup() const {
  if (!biased_group.empty() || groups.empty()) return biased_group;
  return groups.back();
}

void ScenarioSpec::Validate() const {
  Require(n_genuine >= 1 && n_impostor >= 1, "n_genuine and n_impostor must be >= 1");
  Require(groups.size() >= 2, "at least two groups are required");
  std::set<std::string> seen;
  for (const std::string& g : groups) {
    Require(!g.empty(), "group keys must be non-empty");
    Require(seen.insert(g).second, "duplicate group key " + g);
  }
  Require(seen.count(BiasedGroup()) == 1,
          "biased group " + BiasedGroup() + " is not among the groups");
  Require(std::isfinite(strength) && strength >= 0.0, "strength must be finite and >= 0");
  if (scenario == Scenario::kBiasedGenuineTail || scenario == Scenario::kBiasedImpostorTail) {
    Require(strength <= 1.0, "tail scenarios take a mixture weight in [0, 1]");
  }
  ValidateLaw(genuine, "genuine");
  ValidateLaw(impostor, "impostor");
  ValidateLaw(genuine_tail, "genuine_tail");
  ValidateLaw(impostor_tail, "impostor_tail");
  Require(std::isfinite(center_shift) && center_shift >= 0.0, "center_shift must be >= 0");
  Require(operating_fmr > 0.0 && operating_fmr < 0.5, "operating_fmr must lie in (0, 0.5)");
}

double TruncatedNormalCdf(const ScoreLaw& law, double x) {
  const auto& n = StandardNormal();
  const double lo = boost::math::cdf(n, (0.0 - law.mean) / law.stddev);
  const double hi = boost::math::cdf(n, (1.0 - law.mean) / law.stddev);
  const double c = boost::math::cdf(n, (std::clamp(x, 0.0, 1.0) - law.mean) / law.stddev);
  return std::clamp((c - lo) / (hi - lo), 0.0, 1.0);
}

double TruncatedNormalQuantile(const ScoreLaw& law, double p) {
  const auto& n = StandardNormal();
  const double lo = boost::math::cdf(n, (0.0 - law.mean) / law.stddev);
  const double hi = boost::math::cdf(n, (1.0 - law.mean) / law.stddev);
  constexpr double kTiny = std::numeric_limits<double>::min();
  const double q = std::clamp(lo + p * (hi - lo), kTiny, 1.0 - 0x1.0p-53);
  return std::clamp(law.mean + law.stddev * boost::math::quantile(n, q), 0.0, 1.0);
}

double ReferenceOperatingThreshold(const ScenarioSpec& spec) {
  return TruncatedNormalQuantile(spec.impostor, 1.0 - spec.operating_fmr);
}

GroupLaws ResolveGroupLaws(const ScenarioSpec& spec, std::string_view group) {
  GroupLaws laws{spec.genuine, spec.impostor, spec.genuine_tail, 0.0,
                 spec.impostor_tail, 0.0};
  if (group != spec.BiasedGroup() || spec.strength == 0.0) return laws;
  switch (spec.scenario) {
    case Scenario::kClean:
      break;
    case Scenario::kBiasedGenuineTail:
      laws.genuine_tail_weight = spec.strength;
      break;
    case Scenario::kBiasedImpostorTail:
      laws.impostor_tail_weight = spec.strength;
      break;
    case Scenario::kBiasedCenters: {
      const double shift = spec.strength * spec.center_shift;
      const double tau = ReferenceOperatingThreshold(spec);
      const double impostor_level = 1.0 - spec.operating_fmr;
      laws.impostor.mean = spec.impostor.mean - shift;
      laws.impostor.stddev =
          SolveSpread(laws.impostor.mean, impostor_level, tau, "impostor");
      const double genuine_level = TruncatedNormalCdf(spec.genuine, tau);
      laws.genuine.mean = spec.genuine.mean + shift;
      laws.genuine.stddev = SolveSpread(laws.genuine.mean, genuine_level, tau, "genuine");
      break;
    }
  }
  return laws;
}

ScoreSet Generate(const ScenarioSpec& spec) {
  spec.Validate();
  std::vector<ScoreRecord> records;
  records.reserve(spec.groups.size() * (spec.n_genuine + spec.n_impostor));
  for (const std::string& group : spec.groups) {
    const GroupLaws laws = ResolveGroupLaws(spec, group);
    SampleKind(laws.genuine, laws.genuine_tail, laws.genuine_tail_weight, spec.n_genuine,
               spec.seed, group, Kind::kGenuine, records);
    SampleKind(laws.impostor, laws.impostor_tail, laws.impostor_tail_weight,
               spec.n_impostor, spec.seed, group, Kind::kImpostor, records);
  }
  return ScoreSet(std::move(records), Polarity::kSimilarity);
}

ScenarioSpec ParseScenarioSpecJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidSpec, kModule, std::string("invalid JSON: ") + e.what());
  }
  Require(j.is_object(), "scenario spec must be a JSON object");
  ScenarioSpec spec;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "scenario") {
        const auto s = ParseScenario(value.get<std::string>());
        Require(s.has_value(), "unknown scenario " + value.dump());
        spec.scenario = *s;
      } else if (key == "n_genuine") {
        spec.n_genuine = value.get<std::size_t>();
      } else if (key == "n_impostor") {
        spec.n_impostor = value.get<std::size_t>();
      } else if (key == "groups") {
        spec.groups = value.get<std::vector<std::string>>();
      } else if (key == "biased_group") {
        spec.biased_group = value.get<std::string>();
      } else if (key == "strength") {
        spec.strength = value.get<double>();
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "genuine") {
        spec.genuine = LawFromJson(value, key);
      } else if (key == "impostor") {
        spec.impostor = LawFromJson(value, key);
      } else if (key == "genuine_tail") {
        spec.genuine_tail = LawFromJson(value, key);
      } else if (key == "impostor_tail") {
        spec.impostor_tail = LawFromJson(value, key);
      } else if (key == "center_shift") {
        spec.center_shift = value.get<double>();
      } else if (key == "operating_fmr") {
        spec.operating_fmr = value.get<double>();
      } else {
        Require(false, "unknown scenario spec field " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, kModule, std::string("bad field type: ") + e.what());
  }
  spec.Validate();
  return spec;
}

std::string ScenarioSpecToJson(const ScenarioSpec& spec) {
  nlohmann::ordered_json j;
  j["scenario"] = ScenarioName(spec.scenario);
  j["n_genuine"] = spec.n_genuine;
  j["n_impostor"] = spec.n_impostor;
  j["groups"] = spec.groups;
  j["biased_group"] = spec.BiasedGroup();
  j["strength"] = spec.strength;
  j["seed"] = spec.seed;
  j["genuine"] = LawToJson(spec.genuine);
  j["impostor"] = LawToJson(spec.impostor);
  j["genuine_tail"] = LawToJson(spec.genuine_tail);
  j["impostor_tail"] = LawToJson(spec.impostor_tail);
  j["center_shift"] = spec.center_shift;
  j["operating_fmr"] = spec.operating_fmr;
  return j.dump(2);
}

namespace {

void WriteField(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (const char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void WriteCsv(const ScoreSet& set, std::ostream& out) {
  out << "score,kind,group\n";
  char buf[64];
  for (const ScoreRecord& r : set.records()) {
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), r.score);
    out.write(buf, end - buf);
    out << ',' << KindName(r.kind) << ',';
    WriteField(out, r.group);
    out << '\n';
  }
}

void ExportCsv(const ScoreSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, kModule, "cannot open " + path.string());
  WriteCsv(set, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, kModule, "write failed for " + path.string());
}

}  // namespace cei
