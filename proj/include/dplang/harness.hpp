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

#ifndef DPLANG_HARNESS_HPP_
#define DPLANG_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dplang/instance.hpp"

namespace dplang {

enum class Task { kIdentify, kGenerate, kLowerBound, kAudit, kBounds };

// Deterministic integer schedule evaluated at the sample size.
struct Schedule {
  enum class Form {
    kAuto,         // resolved from instance ground truth at run time
    kConstant,     // v
    kSqrtLog,      // max(floor, ceil(sqrt(c * ln n)))
    kPoly,         // max(floor, ceil(n^alpha))
    kLinearFloor,  // max(1, floor(n * p0 / 2))
    kSublinear     // max(1, floor(coeff * n^alpha))
  };
  Form form = Form::kAuto;
  double a = 0.0;  // v / c / alpha / p0 / coeff
  double b = 0.0;  // second parameter (sublinear alpha)
  std::uint64_t floor = 1;

  std::uint64_t Evaluate(std::uint64_t n) const;
  bool IsAuto() const { return form == Form::kAuto; }
  static Schedule Constant(std::uint64_t v);
  // Parses "auto", a number, "constant:12", "sqrt-log:<c>:<floor>",
  // "poly:<alpha>:<floor>", "linear-floor:<p0>", "sublinear:<coeff>:<alpha>".
  static Schedule Parse(const std::string& text);
};

struct LanguageSpec {
  std::string kind;  // "progression" | "finite"
  std::uint64_t offset = 0;
  std::uint64_t step = 1;
  std::vector<std::uint64_t> extras;
  std::vector<std::uint64_t> indices;
};

struct InstanceSpec {
  std::string name;  // built-in name, or "custom"
  std::vector<LanguageSpec> languages;
  std::vector<AtomMass> atoms;  // finite-atom distribution
  bool geometric = false;
  std::uint64_t anchor = 1, base = 0, step = 1;
};

struct ExperimentConfig {
  Task task = Task::kIdentify;
  InstanceSpec instance;
  std::string mechanism;  // pure|approximate|nonprivate / generate modes
  std::vector<std::uint64_t> n_values;
  std::vector<double> epsilons;
  double delta = 0.0;
  Schedule f, g, h;
  std::optional<std::uint64_t> witness_bound;
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::string out_path;  // empty = stdout
  std::string format = "csv";
  bool assert_bounds = false;
  unsigned threads = 0;
  std::uint64_t audit_pairs = 200;
  std::uint64_t scan_limit = kDefaultWitnessScanLimit;
};

// Parses and validates a JSON config document. Throws ConfigError naming
// the offending field.
ExperimentConfig ParseConfig(const std::string& json_text);

// One output row. Optional fields render as empty CSV cells / omitted JSON
// keys.
struct ResultRecord {
  std::string task;
  std::string instance;
  std::string mechanism;
  std::uint64_t n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<std::uint64_t> f, g, h, witness_bound;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::optional<double> estimate, ci_low, ci_high;
  std::optional<double> theoretical_bound;
  std::optional<double> lower_bound;
  std::uint64_t seed = 0;
  std::int64_t wall_time_ms = 0;

  // Not serialized: consumed by --assert-bounds.
  bool check_pass = true;
  bool bound_guaranteed = true;
};

// Exact column set of the CSV emitter.
extern const char* const kCsvHeader;

std::vector<ResultRecord> RunExperiment(const ExperimentConfig& cfg);

// Builds the ground-truth instance for a spec (built-in names: ipp-d,
// ipp-dprime, iidp-d, iidp-dprime).
Instance ResolveInstance(const InstanceSpec& spec, std::uint64_t scan_limit);

void EmitResults(const std::vector<ResultRecord>& records,
                 const std::string& format, std::ostream& out);
void EmitResultsToFile(const std::vector<ResultRecord>& records,
                       const std::string& format, const std::string& path);

// True when every record's bound / lower-bound / audit check held.
bool AllChecksPass(const std::vector<ResultRecord>& records);

// 17-significant-digit rendering used by both emitters (lossless for
// doubles).
std::string RenderDouble(double v);

}  // namespace dplang

#endif  // DPLANG_HARNESS_HPP_
