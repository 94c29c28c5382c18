//
// Copyright 2026 the dplang authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dplang/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "dplang/audit.hpp"
#include "dplang/generation.hpp"
#include "dplang/hardness.hpp"
#include "dplang/identification.hpp"

namespace dplang {

using nlohmann::json;

const char* const kCsvHeader =
    "task,instance,mechanism,n,epsilon,delta,f,g,h,W,trials,failures,"
    "estimate,ci_low,ci_high,theoretical_bound,lower_bound,seed,wall_time_ms";

namespace {

// Every row's trial streams are derived from fields present in the row
// itself, so a single CSV line plus the instance name replays exactly.
std::uint64_t RowSeed(std::uint64_t master, std::uint64_t task_tag,
                      std::uint64_t n, double epsilon) {
  std::uint64_t eps_bits = 0;
  std::memcpy(&eps_bits, &epsilon, sizeof(eps_bits));
  std::uint64_t mixed = SplitMix64(SplitMix64(n + kSeedGamma * (task_tag + 1)) ^
                                   eps_bits);
  return SplitMix64(master ^ mixed);
}

constexpr std::uint64_t kTagIdentify = 1;
constexpr std::uint64_t kTagGenerate = 2;
constexpr std::uint64_t kTagLowerBound = 3;
constexpr std::uint64_t kTagAudit = 4;

std::string TaskName(Task task) {
  switch (task) {
    case Task::kIdentify:
      return "identify";
    case Task::kGenerate:
      return "generate";
    case Task::kLowerBound:
      return "lowerbound";
    case Task::kAudit:
      return "audit";
    case Task::kBounds:
      return "bounds";
  }
  return "?";
}

bool IsIdentifyMechanism(const std::string& m) {
  return m == "pure" || m == "approximate" || m == "nonprivate";
}

bool IsGenerateMode(const std::string& m) {
  return m == "public" || m == "joint" || m == "approximate-joint" ||
         m == "nonprivate";
}

IdMechanism ParseIdMechanism(const std::string& m) {
  if (m == "pure") return IdMechanism::kPure;
  if (m == "approximate") return IdMechanism::kApproximate;
  if (m == "nonprivate") return IdMechanism::kNonPrivate;
  throw ConfigError("mechanism: expected pure|approximate|nonprivate, got '" +
                    m + "'");
}

GenMode ParseGenMode(const std::string& m) {
  if (m == "public") return GenMode::kPublic;
  if (m == "joint") return GenMode::kJoint;
  if (m == "approximate-joint") return GenMode::kApproximateJoint;
  if (m == "nonprivate") return GenMode::kNonPrivate;
  throw ConfigError(
      "mode: expected public|joint|approximate-joint|nonprivate, got '" + m +
      "'");
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  std::int64_t ElapsedMs() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

std::uint64_t Schedule::Evaluate(std::uint64_t n) const {
  const double nn = static_cast<double>(n);
  double value = 0.0;
  switch (form) {
    case Form::kAuto:
      throw ConfigError("auto schedule was not resolved before evaluation");
    case Form::kConstant:
      value = a;
      break;
    case Form::kSqrtLog:
      value = std::ceil(std::sqrt(a * std::log(nn)));
      break;
    case Form::kPoly:
      value = std::ceil(std::pow(nn, a));
      break;
    case Form::kLinearFloor:
      value = std::floor(nn * a / 2.0);
      break;
    case Form::kSublinear:
      value = std::floor(a * std::pow(nn, b));
      break;
  }
  if (!(value >= 0.0) || value > 9.0e18) {
    throw ConfigError("schedule evaluates outside the integer range");
  }
  std::uint64_t v = static_cast<std::uint64_t>(value);
  if (form == Form::kSqrtLog || form == Form::kPoly) {
    v = std::max(v, floor);
  }
  return std::max<std::uint64_t>(v, 1);
}

Schedule Schedule::Constant(std::uint64_t v) {
  Schedule s;
  s.form = Form::kConstant;
  s.a = static_cast<double>(v);
  return s;
}

Schedule Schedule::Parse(const std::string& text) {
  if (text == "auto") return Schedule{};
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ':')) parts.push_back(token);
  if (parts.empty()) throw ConfigError("empty schedule");
  auto num = [&](std::size_t i, double fallback) {
    if (i >= parts.size() || parts[i].empty()) return fallback;
    try {
      return std::stod(parts[i]);
    } catch (const std::exception&) {
      throw ConfigError("schedule parameter '" + parts[i] + "' is not a number");
    }
  };
  Schedule s;
  if (parts.size() == 1) {
    s.form = Form::kConstant;
    s.a = num(0, 0.0);
    if (s.a < 1.0) throw ConfigError("constant schedule must be >= 1");
    return s;
  }
  const std::string& head = parts[0];
  if (head == "constant") {
    s.form = Form::kConstant;
    s.a = num(1, 1.0);
  } else if (head == "sqrt-log") {
    s.form = Form::kSqrtLog;
    s.a = num(1, 1.0);
    s.floor = static_cast<std::uint64_t>(num(2, 1.0));
  } else if (head == "poly") {
    s.form = Form::kPoly;
    s.a = num(1, 0.5);
    s.floor = static_cast<std::uint64_t>(num(2, 1.0));
  } else if (head == "linear-floor") {
    s.form = Form::kLinearFloor;
    s.a = num(1, 0.0);
    if (!(s.a > 0.0 && s.a <= 1.0)) {
      throw ConfigError("linear-floor mass must lie in (0, 1]");
    }
  } else if (head == "sublinear") {
    s.form = Form::kSublinear;
    s.a = num(1, 1.0);
    s.b = num(2, 0.5);
    if (!(s.b < 1.0)) throw ConfigError("sublinear exponent must be < 1");
  } else {
    throw ConfigError("unknown schedule form '" + head + "'");
  }
  return s;
}

namespace {

Schedule ScheduleFromJson(const json& j, const std::string& field) {
  if (j.is_number()) {
    double v = j.get<double>();
    if (v < 1.0) throw ConfigError(field + ": schedule constant must be >= 1");
    return Schedule::Constant(static_cast<std::uint64_t>(v));
  }
  if (j.is_string()) return Schedule::Parse(j.get<std::string>());
  if (j.is_object()) {
    std::string form = j.value("form", "constant");
    std::ostringstream text;
    text << form;
    if (form == "constant") {
      text << ":" << j.value("value", 1.0);
    } else if (form == "sqrt-log") {
      text << ":" << j.value("c", 1.0) << ":" << j.value("floor", 1.0);
    } else if (form == "poly") {
      text << ":" << j.value("alpha", 0.5) << ":" << j.value("floor", 1.0);
    } else if (form == "linear-floor") {
      text << ":" << j.value("p0", 0.0);
    } else if (form == "sublinear") {
      text << ":" << j.value("coeff", 1.0) << ":" << j.value("alpha", 0.5);
    } else if (form != "auto") {
      throw ConfigError(field + ": unknown schedule form '" + form + "'");
    }
    return Schedule::Parse(text.str());
  }
  throw ConfigError(field + ": expected number, string, or object");
}

std::vector<LanguageSpec> ParseLanguageSpecs(const json& arr,
                                             const std::string& field) {
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(field + ": expected a non-empty array");
  }
  std::vector<LanguageSpec> specs;
  for (const json& item : arr) {
    LanguageSpec spec;
    spec.kind = item.value("kind", "progression");
    if (spec.kind == "progression") {
      spec.offset = item.value("offset", 0ULL);
      spec.step = item.value("step", 1ULL);
      spec.extras = item.value("extras", std::vector<std::uint64_t>{});
    } else if (spec.kind == "finite") {
      spec.indices = item.value("indices", std::vector<std::uint64_t>{});
      if (spec.indices.empty()) {
        throw ConfigError(field + ": finite language needs indices");
      }
    } else {
      throw ConfigError(field + ": unknown language kind '" + spec.kind + "'");
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<AtomMass> ParseAtomList(const std::string& text) {
  // "atoms:1=0.75,3=0.25"
  std::vector<AtomMass> atoms;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("instance: atom entry '" + item + "' must be idx=mass");
    }
    try {
      atoms.push_back({static_cast<UniverseIndex>(std::stoull(item.substr(0, eq))),
                       std::stod(item.substr(eq + 1))});
    } catch (const std::exception&) {
      throw ConfigError("instance: malformed atom entry '" + item + "'");
    }
  }
  if (atoms.empty()) throw ConfigError("instance: empty atom list");
  return atoms;
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const char* kKnownKeys[] = {
      "task",    "instance",      "languages", "mechanism",  "mode",
      "n",       "epsilon",       "delta",     "f",          "g",
      "h",       "witness_bound", "trials",    "seed",       "out",
      "format",  "assert_bounds", "threads",   "audit_pairs", "scan_limit"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnownKeys) known |= it.key() == k;
    if (!known) throw ConfigError("unknown config field '" + it.key() + "'");
  }

  ExperimentConfig cfg;
  const std::string task = j.value("task", "identify");
  if (task == "identify") {
    cfg.task = Task::kIdentify;
  } else if (task == "generate") {
    cfg.task = Task::kGenerate;
  } else if (task == "lowerbound") {
    cfg.task = Task::kLowerBound;
  } else if (task == "audit") {
    cfg.task = Task::kAudit;
  } else if (task == "bounds") {
    cfg.task = Task::kBounds;
  } else {
    throw ConfigError("task: expected identify|generate|lowerbound|audit|"
                      "bounds, got '" + task + "'");
  }

  if (j.contains("mechanism") && j.contains("mode")) {
    throw ConfigError("give either 'mechanism' or 'mode', not both");
  }
  cfg.mechanism = j.value("mechanism", j.value("mode", ""));
  if (cfg.mechanism.empty()) {
    switch (cfg.task) {
      case Task::kGenerate:
        cfg.mechanism = "public";
        break;
      case Task::kAudit:
        cfg.mechanism = "";
        break;
      default:
        cfg.mechanism = "pure";
    }
  }
  if (cfg.task == Task::kIdentify && !IsIdentifyMechanism(cfg.mechanism)) {
    throw ConfigError("mechanism: '" + cfg.mechanism +
                      "' is not an identification mechanism");
  }
  if (cfg.task == Task::kGenerate && !IsGenerateMode(cfg.mechanism)) {
    throw ConfigError("mode: '" + cfg.mechanism +
                      "' is not a generation mode");
  }
  if ((cfg.task == Task::kLowerBound || cfg.task == Task::kBounds) &&
      !IsIdentifyMechanism(cfg.mechanism) && !IsGenerateMode(cfg.mechanism)) {
    throw ConfigError("mechanism: '" + cfg.mechanism + "' is unknown");
  }

  // Instance: built-in name, "atoms:..." shorthand, or custom object.
  if (j.contains("instance") && j["instance"].is_object()) {
    const json& obj = j["instance"];
    cfg.instance.name = obj.value("name", "custom");
    if (obj.contains("languages")) {
      cfg.instance.languages = ParseLanguageSpecs(obj["languages"],
                                                  "instance.languages");
    }
    if (obj.contains("atoms")) {
      for (const json& a : obj["atoms"]) {
        cfg.instance.atoms.push_back(
            {a.at(0).get<UniverseIndex>(), a.at(1).get<double>()});
      }
    }
    if (obj.contains("geometric")) {
      const json& g = obj["geometric"];
      cfg.instance.geometric = true;
      cfg.instance.anchor = g.value("anchor", 1ULL);
      cfg.instance.base = g.value("base", 0ULL);
      cfg.instance.step = g.value("step", 1ULL);
    }
  } else {
    std::string name = j.value("instance", "");
    if (name.empty()) {
      if (cfg.task == Task::kLowerBound) {
        name = IsGenerateMode(cfg.mechanism) ? "iidp" : "ipp";
      } else if (cfg.task == Task::kGenerate ||
                 (cfg.task == Task::kBounds && IsGenerateMode(cfg.mechanism))) {
        name = "iidp-d";
      } else {
        name = "ipp-d";
      }
    }
    if (name.rfind("atoms:", 0) == 0) {
      cfg.instance.name = "custom";
      cfg.instance.atoms = ParseAtomList(name.substr(6));
      if (!j.contains("languages")) {
        throw ConfigError("atoms shorthand requires a 'languages' array");
      }
      cfg.instance.languages = ParseLanguageSpecs(j["languages"], "languages");
    } else {
      cfg.instance.name = name;
    }
  }

  auto parse_list_u64 = [&](const char* key,
                            std::vector<std::uint64_t> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<std::uint64_t> out;
    if (j[key].is_array()) {
      for (const json& v : j[key]) out.push_back(v.get<std::uint64_t>());
    } else {
      out.push_back(j[key].get<std::uint64_t>());
    }
    if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    return out;
  };
  auto parse_list_f64 = [&](const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<double> out;
    if (j[key].is_array()) {
      for (const json& v : j[key]) out.push_back(v.get<double>());
    } else {
      out.push_back(j[key].get<double>());
    }
    if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    return out;
  };

  cfg.n_values = parse_list_u64("n", {1000});
  for (std::uint64_t n : cfg.n_values) {
    if (n == 0) throw ConfigError("n: sample sizes must be >= 1");
  }
  cfg.epsilons = parse_list_f64("epsilon", {1.0});
  for (double e : cfg.epsilons) {
    if (!(e > 0.0)) throw ConfigError("epsilon: values must be positive");
  }
  cfg.delta = j.value("delta", 0.0);
  if (cfg.delta < 0.0 || cfg.delta >= 1.0) {
    throw ConfigError("delta: must lie in [0, 1)");
  }
  if ((cfg.mechanism == "approximate" ||
       cfg.mechanism == "approximate-joint") &&
      cfg.delta == 0.0) {
    throw ConfigError("delta: approximate mechanisms need delta in (0, 1)");
  }
  if (j.contains("f")) cfg.f = ScheduleFromJson(j["f"], "f");
  if (j.contains("g")) cfg.g = ScheduleFromJson(j["g"], "g");
  if (j.contains("h")) cfg.h = ScheduleFromJson(j["h"], "h");
  if (j.contains("witness_bound")) {
    cfg.witness_bound = j["witness_bound"].get<std::uint64_t>();
    if (*cfg.witness_bound == 0) throw ConfigError("witness_bound: must be >= 1");
  }
  cfg.trials = j.value("trials", 1000ULL);
  if (cfg.trials == 0 && cfg.task != Task::kBounds) {
    throw ConfigError("trials: must be >= 1");
  }
  cfg.master_seed = j.value("seed", 0ULL);
  cfg.out_path = j.value("out", "");
  cfg.format = j.value("format", "csv");
  if (cfg.format == "json-lines") cfg.format = "jsonl";
  if (cfg.format != "csv" && cfg.format != "jsonl") {
    throw ConfigError("format: expected csv or json-lines");
  }
  cfg.assert_bounds = j.value("assert_bounds", false);
  cfg.threads = j.value("threads", 0u);
  cfg.audit_pairs = j.value("audit_pairs", 200ULL);
  if (cfg.audit_pairs == 0) throw ConfigError("audit_pairs: must be >= 1");
  cfg.scan_limit = j.value("scan_limit", kDefaultWitnessScanLimit);
  if (cfg.scan_limit == 0) throw ConfigError("scan_limit: must be >= 1");
  return cfg;
}

Instance ResolveInstance(const InstanceSpec& spec, std::uint64_t scan_limit) {
  if (spec.name == "ipp-d") return MakeHardInstance(HardVariant::kIpp).Side(false);
  if (spec.name == "ipp-dprime") {
    return MakeHardInstance(HardVariant::kIpp).Side(true);
  }
  if (spec.name == "iidp-d") {
    return MakeHardInstance(HardVariant::kIidp).Side(false);
  }
  if (spec.name == "iidp-dprime") {
    return MakeHardInstance(HardVariant::kIidp).Side(true);
  }
  if (spec.languages.empty()) {
    throw InstanceError("unknown instance '" + spec.name + "'");
  }
  std::vector<Language> langs;
  for (const LanguageSpec& ls : spec.languages) {
    if (ls.kind == "progression") {
      langs.push_back(Language::Progression(ls.offset, ls.step, ls.extras));
    } else {
      langs.push_back(Language::FiniteSet(ls.indices));
    }
  }
  Distribution dist =
      spec.geometric
          ? Distribution::StructuredGeometric(spec.anchor, spec.base, spec.step)
          : Distribution::FiniteAtoms(spec.atoms);
  return MakeInstance(Collection(std::move(langs)), std::move(dist), spec.name,
                      scan_limit);
}

namespace {

std::uint64_t ResolveF(const ExperimentConfig& cfg, const Instance& inst,
                       std::uint64_t n, bool generate) {
  if (!cfg.f.IsAuto()) return cfg.f.Evaluate(n);
  const std::uint64_t base = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(std::log(static_cast<double>(n)))));
  std::uint64_t target =
      generate ? inst.reference_index.value_or(1) : inst.optimal_index;
  return std::max<std::uint64_t>({base, target, 1});
}

struct ResolvedGen {
  GenConfig cfg;
  std::optional<CoverageStats> coverage;
  bool guaranteed = true;
};

ResolvedGen ResolveGenConfig(const ExperimentConfig& cfg, const Instance& inst,
                             std::uint64_t n, double epsilon) {
  ResolvedGen out;
  out.cfg.mode = ParseGenMode(cfg.mechanism);
  out.cfg.privacy = {epsilon, cfg.delta};
  out.cfg.f_n = ResolveF(cfg, inst, n, /*generate=*/true);

  const bool joint = out.cfg.mode == GenMode::kJoint ||
                     out.cfg.mode == GenMode::kApproximateJoint;
  if (out.cfg.mode == GenMode::kPublic) {
    if (cfg.witness_bound.has_value()) {
      out.cfg.witness_bound = *cfg.witness_bound;
    } else if (inst.witness_index.has_value()) {
      out.cfg.witness_bound = *inst.witness_index;
    } else {
      throw ConfigError(
          "public mode needs --witness-bound (witness scan inconclusive)");
    }
    if (inst.witness_index.has_value()) {
      out.guaranteed &= out.cfg.witness_bound >= *inst.witness_index;
    } else {
      out.guaranteed = false;
    }
  }
  if (joint) {
    if (cfg.h.IsAuto()) {
      if (!inst.witness_index.has_value()) {
        throw ConfigError("h: auto needs a conclusive witness scan");
      }
      out.cfg.h_n = 2 * *inst.witness_index;
    } else {
      out.cfg.h_n = cfg.h.Evaluate(n);
    }
    if (inst.witness_index.has_value()) {
      out.guaranteed &= out.cfg.h_n >= 2 * *inst.witness_index;
    } else {
      out.guaranteed = false;
    }
  }

  const std::uint64_t horizon =
      out.cfg.mode == GenMode::kPublic ? out.cfg.witness_bound : out.cfg.h_n;
  if (inst.reference_index.has_value()) {
    out.coverage = ComputeCoverageStats(
        inst.dist, inst.collection.At(*inst.reference_index), horizon);
    out.guaranteed &= out.cfg.f_n >= *inst.reference_index;
  } else {
    out.guaranteed = false;
  }

  if (cfg.g.IsAuto()) {
    if (!out.coverage.has_value()) {
      throw ConfigError("g: auto needs a reference language inside the support");
    }
    out.cfg.g_n = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::floor(
               static_cast<double>(n) * out.coverage->p_star / 2.0)));
  } else {
    out.cfg.g_n = cfg.g.Evaluate(n);
  }
  if (out.coverage.has_value()) {
    out.guaranteed &= static_cast<double>(out.cfg.g_n) <=
                      static_cast<double>(n) * out.coverage->p_star / 2.0;
  }
  return out;
}

void FillCi(ResultRecord& rec, const Interval& wilson) {
  rec.ci_low = wilson.low;
  rec.ci_high = wilson.high;
}

ResultRecord BaseRecord(const ExperimentConfig& cfg, std::uint64_t n,
                        double epsilon) {
  ResultRecord rec;
  rec.task = TaskName(cfg.task);
  rec.instance = cfg.instance.name;
  rec.mechanism = cfg.mechanism;
  rec.n = n;
  rec.epsilon = epsilon;
  rec.delta = cfg.delta;
  rec.trials = cfg.trials;
  rec.seed = cfg.master_seed;
  return rec;
}

void RunIdentifyPoint(const ExperimentConfig& cfg, const Instance& inst,
                      std::uint64_t n, double epsilon,
                      std::vector<ResultRecord>& records) {
  Timer timer;
  ResultRecord rec = BaseRecord(cfg, n, epsilon);
  IdConfig id;
  id.f_n = ResolveF(cfg, inst, n, /*generate=*/false);
  id.privacy = {epsilon, cfg.delta};
  id.mechanism = ParseIdMechanism(cfg.mechanism);
  rec.f = id.f_n;

  IdEstimate est =
      EstimateIdErr(inst, id, n, cfg.trials,
                    RowSeed(cfg.master_seed, kTagIdentify, n, epsilon), 0,
                    cfg.threads);
  rec.failures = est.failures;
  rec.estimate = est.misid_freq;
  FillCi(rec, est.wilson);

  bool guaranteed = id.f_n >= inst.optimal_index &&
                    !inst.population_errs_truncated;
  if (inst.optimal_index > 1) {
    guaranteed &= static_cast<double>(id.f_n) >= 3.0 / inst.risk_gap;
  }
  rec.bound_guaranteed = guaranteed;
  if (est.bound.has_value() && guaranteed) {
    rec.theoretical_bound = *est.bound;
    rec.check_pass = est.wilson.low <= *est.bound;
  }
  rec.wall_time_ms = timer.ElapsedMs();
  records.push_back(std::move(rec));
}

void RunGeneratePoint(const ExperimentConfig& cfg, const Instance& inst,
                      std::uint64_t n, double epsilon,
                      std::vector<ResultRecord>& records) {
  Timer timer;
  ResultRecord rec = BaseRecord(cfg, n, epsilon);
  ResolvedGen resolved = ResolveGenConfig(cfg, inst, n, epsilon);
  rec.f = resolved.cfg.f_n;
  rec.g = resolved.cfg.g_n;
  if (resolved.cfg.mode == GenMode::kJoint ||
      resolved.cfg.mode == GenMode::kApproximateJoint) {
    rec.h = resolved.cfg.h_n;
  }
  if (resolved.cfg.mode == GenMode::kPublic) {
    rec.witness_bound = resolved.cfg.witness_bound;
  }

  GenEstimate est =
      EstimateGenErr(inst, resolved.cfg, n, cfg.trials,
                     RowSeed(cfg.master_seed, kTagGenerate, n, epsilon), 0,
                     cfg.threads);
  rec.failures = est.failures;
  rec.estimate = est.failure_freq;
  FillCi(rec, est.wilson);

  rec.bound_guaranteed = resolved.guaranteed;
  if (resolved.cfg.mode != GenMode::kNonPrivate && resolved.guaranteed &&
      resolved.coverage.has_value()) {
    GenBoundInputs inputs{resolved.cfg.f_n, resolved.cfg.g_n, resolved.cfg.h_n,
                          resolved.coverage->indices.size(),
                          resolved.coverage->p_star};
    rec.theoretical_bound =
        GenErrorBound(n, inputs, resolved.cfg.privacy, resolved.cfg.mode);
    rec.check_pass = est.wilson.low <= *rec.theoretical_bound;
  }
  rec.wall_time_ms = timer.ElapsedMs();
  records.push_back(std::move(rec));
}

void RunLowerBoundPoint(const ExperimentConfig& cfg, const HardInstance& hard,
                        const Instance& d_side, std::uint64_t n,
                        double epsilon, std::vector<ResultRecord>& records) {
  Timer timer;
  ResultRecord rec = BaseRecord(cfg, n, epsilon);
  LbAlgorithmConfig algo;
  if (IsIdentifyMechanism(cfg.mechanism)) {
    algo.task = LbTask::kIdentify;
    algo.id.f_n = ResolveF(cfg, d_side, n, /*generate=*/false);
    algo.id.privacy = {epsilon, cfg.delta};
    algo.id.mechanism = ParseIdMechanism(cfg.mechanism);
    rec.f = algo.id.f_n;
  } else {
    algo.task = LbTask::kGenerate;
    ExperimentConfig gen_cfg = cfg;
    gen_cfg.mechanism = cfg.mechanism;
    ResolvedGen resolved = ResolveGenConfig(gen_cfg, d_side, n, epsilon);
    algo.gen = resolved.cfg;
    rec.f = resolved.cfg.f_n;
    rec.g = resolved.cfg.g_n;
    if (algo.gen.mode == GenMode::kJoint ||
        algo.gen.mode == GenMode::kApproximateJoint) {
      rec.h = resolved.cfg.h_n;
    }
    if (algo.gen.mode == GenMode::kPublic) {
      rec.witness_bound = resolved.cfg.witness_bound;
    }
  }

  LbCheckReport report = EmpiricalLbCheck(
      hard, algo, n, epsilon, cfg.trials,
      RowSeed(cfg.master_seed, kTagLowerBound, n, epsilon), cfg.threads);
  if (report.applicable) {
    rec.failures = std::max(report.failures_d, report.failures_dprime);
    rec.estimate = report.statistic;
    FillCi(rec, WilsonInterval(rec.failures, cfg.trials));
    rec.lower_bound = report.lower_bound;
    rec.check_pass = report.pass;
  } else {
    rec.check_pass = true;  // not applicable to non-private baselines
  }
  rec.wall_time_ms = timer.ElapsedMs();
  records.push_back(std::move(rec));
}

void RunAuditPoint(const ExperimentConfig& cfg, const Instance& inst,
                   std::uint64_t n, double epsilon,
                   std::vector<ResultRecord>& records) {
  AuditParams params;
  if (!cfg.f.IsAuto()) params.f_n = cfg.f.Evaluate(n);
  if (!cfg.g.IsAuto()) params.g_n = cfg.g.Evaluate(n);
  if (!cfg.h.IsAuto()) params.h_n = cfg.h.Evaluate(n);
  if (cfg.witness_bound.has_value()) params.witness_bound = *cfg.witness_bound;
  const std::uint64_t seed = RowSeed(cfg.master_seed, kTagAudit, n, epsilon);

  auto emit = [&](const Timer& timer, const AuditReport& report) {
    ResultRecord rec = BaseRecord(cfg, n, epsilon);
    rec.mechanism = report.check;
    rec.f = params.f_n;
    rec.g = params.g_n;
    rec.h = params.h_n;
    rec.witness_bound = params.witness_bound;
    rec.trials = report.pairs;
    rec.failures = report.pass ? 0 : 1;
    rec.estimate = report.statistic;
    rec.theoretical_bound = report.bound;
    rec.check_pass = report.pass;
    rec.wall_time_ms = timer.ElapsedMs();
    records.push_back(std::move(rec));
  };

  for (ScoreFamily family :
       {ScoreFamily::kIdentification, ScoreFamily::kGenPublic,
        ScoreFamily::kGenPair}) {
    Timer ratio_timer;
    emit(ratio_timer, AuditExpRatio(family, inst, n, epsilon, cfg.audit_pairs,
                                    seed, params));
    Timer sens_timer;
    emit(sens_timer,
         AuditSensitivity(family, inst, n, cfg.audit_pairs, seed, params));
  }
  for (int k : {2, 3}) {
    Timer timer;
    emit(timer, AuditExpRatio(ScoreFamily::kIdentification, inst, n, epsilon,
                              cfg.audit_pairs, seed, params, k));
  }
  if (cfg.delta > 0.0 && cfg.delta < 1.0) {
    Timer timer;
    emit(timer, AuditGaussianIdScale(params.f_n, n, epsilon, cfg.delta));
  }
}

void RunBoundsPoint(const ExperimentConfig& cfg, const Instance& inst,
                    std::uint64_t n, double epsilon,
                    std::vector<ResultRecord>& records) {
  Timer timer;
  ResultRecord rec = BaseRecord(cfg, n, epsilon);
  rec.trials = 0;

  if (IsIdentifyMechanism(cfg.mechanism)) {
    IdMechanism mech = ParseIdMechanism(cfg.mechanism);
    std::uint64_t f_n = ResolveF(cfg, inst, n, /*generate=*/false);
    rec.f = f_n;
    if (mech != IdMechanism::kNonPrivate) {
      rec.theoretical_bound =
          IdErrorBound(n, f_n, {epsilon, cfg.delta}, mech);
    }
    if (n >= 2 && (rec.instance.rfind("ipp", 0) == 0 ||
                   rec.instance.rfind("iidp", 0) == 0)) {
      rec.lower_bound = LbValue(LbTask::kIdentify, n, epsilon).value;
    }
  } else {
    ResolvedGen resolved = ResolveGenConfig(cfg, inst, n, epsilon);
    rec.f = resolved.cfg.f_n;
    rec.g = resolved.cfg.g_n;
    if (resolved.cfg.mode == GenMode::kJoint ||
        resolved.cfg.mode == GenMode::kApproximateJoint) {
      rec.h = resolved.cfg.h_n;
    }
    if (resolved.cfg.mode == GenMode::kPublic) {
      rec.witness_bound = resolved.cfg.witness_bound;
    }
    if (resolved.cfg.mode != GenMode::kNonPrivate &&
        resolved.coverage.has_value()) {
      GenBoundInputs inputs{resolved.cfg.f_n, resolved.cfg.g_n,
                            resolved.cfg.h_n,
                            resolved.coverage->indices.size(),
                            resolved.coverage->p_star};
      rec.theoretical_bound =
          GenErrorBound(n, inputs, {epsilon, cfg.delta}, resolved.cfg.mode);
    }
    rec.bound_guaranteed = resolved.guaranteed;
    if (n >= 2 && rec.instance.rfind("iidp", 0) == 0) {
      rec.lower_bound = LbValue(LbTask::kGenerate, n, epsilon).value;
    }
  }
  rec.wall_time_ms = timer.ElapsedMs();
  records.push_back(std::move(rec));
}

}  // namespace

std::vector<ResultRecord> RunExperiment(const ExperimentConfig& cfg) {
  std::vector<ResultRecord> records;

  if (cfg.task == Task::kLowerBound) {
    std::string name = cfg.instance.name;
    if (name == "ipp-d" || name == "ipp-dprime") name = "ipp";
    if (name == "iidp-d" || name == "iidp-dprime") name = "iidp";
    HardVariant variant;
    if (name == "ipp") {
      variant = HardVariant::kIpp;
    } else if (name == "iidp") {
      variant = HardVariant::kIidp;
    } else {
      throw InstanceError("lowerbound task needs the ipp or iidp instance");
    }
    HardInstance hard = MakeHardInstance(variant);
    Instance d_side = hard.Side(false);
    ExperimentConfig named = cfg;
    named.instance.name = name;
    for (std::uint64_t n : cfg.n_values) {
      for (double eps : cfg.epsilons) {
        RunLowerBoundPoint(named, hard, d_side, n, eps, records);
      }
    }
    return records;
  }

  Instance inst = ResolveInstance(cfg.instance, cfg.scan_limit);
  for (std::uint64_t n : cfg.n_values) {
    for (double eps : cfg.epsilons) {
      switch (cfg.task) {
        case Task::kIdentify:
          RunIdentifyPoint(cfg, inst, n, eps, records);
          break;
        case Task::kGenerate:
          RunGeneratePoint(cfg, inst, n, eps, records);
          break;
        case Task::kAudit:
          RunAuditPoint(cfg, inst, n, eps, records);
          break;
        case Task::kBounds:
          RunBoundsPoint(cfg, inst, n, eps, records);
          break;
        case Task::kLowerBound:
          break;  // handled above
      }
    }
  }
  return records;
}

std::string RenderDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string OptU64(const std::optional<std::uint64_t>& v) {
  return v.has_value() ? std::to_string(*v) : std::string();
}

std::string OptF64(const std::optional<double>& v) {
  return v.has_value() ? RenderDouble(*v) : std::string();
}

void EmitCsv(const std::vector<ResultRecord>& records, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const ResultRecord& r : records) {
    out << r.task << ',' << r.instance << ',' << r.mechanism << ',' << r.n
        << ',' << RenderDouble(r.epsilon) << ',' << RenderDouble(r.delta)
        << ',' << OptU64(r.f) << ',' << OptU64(r.g) << ',' << OptU64(r.h)
        << ',' << OptU64(r.witness_bound) << ',' << r.trials << ','
        << r.failures << ',' << OptF64(r.estimate) << ',' << OptF64(r.ci_low)
        << ',' << OptF64(r.ci_high) << ',' << OptF64(r.theoretical_bound)
        << ',' << OptF64(r.lower_bound) << ',' << r.seed << ','
        << r.wall_time_ms << "\n";
  }
}

void EmitJsonLines(const std::vector<ResultRecord>& records,
                   std::ostream& out) {
  for (const ResultRecord& r : records) {
    out << "{\"task\":\"" << r.task << "\",\"instance\":\"" << r.instance
        << "\",\"mechanism\":\"" << r.mechanism << "\",\"n\":" << r.n
        << ",\"epsilon\":" << RenderDouble(r.epsilon)
        << ",\"delta\":" << RenderDouble(r.delta);
    if (r.f) out << ",\"f\":" << *r.f;
    if (r.g) out << ",\"g\":" << *r.g;
    if (r.h) out << ",\"h\":" << *r.h;
    if (r.witness_bound) out << ",\"W\":" << *r.witness_bound;
    out << ",\"trials\":" << r.trials << ",\"failures\":" << r.failures;
    if (r.estimate) out << ",\"estimate\":" << RenderDouble(*r.estimate);
    if (r.ci_low) out << ",\"ci_low\":" << RenderDouble(*r.ci_low);
    if (r.ci_high) out << ",\"ci_high\":" << RenderDouble(*r.ci_high);
    if (r.theoretical_bound) {
      out << ",\"theoretical_bound\":" << RenderDouble(*r.theoretical_bound);
    }
    if (r.lower_bound) out << ",\"lower_bound\":" << RenderDouble(*r.lower_bound);
    out << ",\"seed\":" << r.seed << ",\"wall_time_ms\":" << r.wall_time_ms
        << "}\n";
  }
}

}  // namespace

void EmitResults(const std::vector<ResultRecord>& records,
                 const std::string& format, std::ostream& out) {
  if (format == "csv") {
    EmitCsv(records, out);
  } else if (format == "jsonl" || format == "json-lines") {
    EmitJsonLines(records, out);
  } else {
    throw ConfigError("format: expected csv or json-lines");
  }
}

void EmitResultsToFile(const std::vector<ResultRecord>& records,
                       const std::string& format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  EmitResults(records, format, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

bool AllChecksPass(const std::vector<ResultRecord>& records) {
  for (const ResultRecord& r : records) {
    if (!r.check_pass) return false;
  }
  return true;
}

}  // namespace dplang
