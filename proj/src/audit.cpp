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

#include "dplang/audit.hpp"

#include <algorithm>
#include <cmath>

#include "dplang/generation.hpp"
#include "dplang/identification.hpp"
#include "dplang/mechanisms.hpp"

namespace dplang {

namespace {

constexpr double kRatioTolerance = 1e-9;
constexpr double kSensitivityTolerance = 1e-12;
constexpr double kCalibrationTolerance = 1e-12;

const char* FamilyName(ScoreFamily family) {
  switch (family) {
    case ScoreFamily::kIdentification:
      return "identification";
    case ScoreFamily::kGenPublic:
      return "gen-public";
    case ScoreFamily::kGenPair:
      return "gen-pair";
  }
  return "?";
}

ScoreVector BuildScores(ScoreFamily family, const Dataset& data,
                        const Instance& instance, const AuditParams& params) {
  switch (family) {
    case ScoreFamily::kIdentification:
      return IdScoreVector(data, instance.collection, params.f_n);
    case ScoreFamily::kGenPublic: {
      GenConfig cfg;
      cfg.mode = GenMode::kPublic;
      cfg.f_n = params.f_n;
      cfg.g_n = params.g_n;
      cfg.witness_bound = params.witness_bound;
      GenDiagnostics diag = GenScores(data, instance.collection, cfg);
      return {std::move(diag.scores), diag.declared_sensitivity,
              SensitivityKind::kPerCoordinate};
    }
    case ScoreFamily::kGenPair: {
      GenConfig cfg;
      cfg.mode = GenMode::kJoint;
      cfg.f_n = params.f_n;
      cfg.g_n = params.g_n;
      cfg.h_n = params.h_n;
      GenDiagnostics diag = GenScores(data, instance.collection, cfg);
      return {std::move(diag.scores), diag.declared_sensitivity,
              SensitivityKind::kPerCoordinate};
    }
  }
  throw Error("unreachable");
}

AuditReport FinishReport(std::string check, double statistic, double bound,
                         double tolerance, std::uint64_t pairs,
                         std::uint64_t seed) {
  AuditReport report;
  report.check = std::move(check);
  report.statistic = statistic;
  report.bound = bound;
  report.tolerance = tolerance;
  report.margin = bound + tolerance - statistic;
  report.pass = statistic <= bound + tolerance;
  report.pairs = pairs;
  report.seed = seed;
  return report;
}

}  // namespace

AuditReport AuditExpRatio(ScoreFamily family, const Instance& instance,
                          std::uint64_t n, double epsilon, std::uint64_t pairs,
                          std::uint64_t master_seed, const AuditParams& params,
                          int group_size) {
  if (pairs == 0) throw InstanceError("probe count must be >= 1");
  if (group_size < 1) throw InstanceError("group size must be >= 1");
  double worst = 0.0;
  for (std::uint64_t probe = 0; probe < pairs; ++probe) {
    RandomStream rng(MixSeed(master_seed, 0, probe));
    std::vector<UniverseIndex> entries;
    entries.reserve(n);
    for (std::uint64_t t = 0; t < n; ++t) {
      entries.push_back(instance.dist.Sample(rng));
    }
    std::vector<UniverseIndex> neighbor = entries;
    for (int r = 0; r < group_size; ++r) {
      neighbor[rng.NextBelow(n)] = instance.dist.Sample(rng);
    }
    Dataset s(std::move(entries));
    Dataset sprime(std::move(neighbor));
    std::vector<double> p =
        ExpMechProbs(BuildScores(family, s, instance, params), epsilon);
    std::vector<double> q =
        ExpMechProbs(BuildScores(family, sprime, instance, params), epsilon);
    for (std::size_t i = 0; i < p.size(); ++i) {
      worst = std::max(worst, std::abs(std::log(p[i]) - std::log(q[i])));
    }
  }
  std::string check = std::string("exp-ratio:") + FamilyName(family);
  if (group_size > 1) check += ":group" + std::to_string(group_size);
  return FinishReport(std::move(check), worst, group_size * epsilon,
                      kRatioTolerance, pairs, master_seed);
}

AuditReport AuditSensitivity(ScoreFamily family, const Instance& instance,
                             std::uint64_t n, std::uint64_t pairs,
                             std::uint64_t master_seed,
                             const AuditParams& params) {
  if (pairs == 0) throw InstanceError("probe count must be >= 1");
  const auto& atoms = instance.probe_atoms;
  double worst = 0.0;
  double declared = 0.0;
  for (std::uint64_t probe = 0; probe < pairs; ++probe) {
    RandomStream rng(MixSeed(master_seed, 1, probe));
    std::vector<UniverseIndex> entries;
    entries.reserve(n);
    for (std::uint64_t t = 0; t < n; ++t) {
      entries.push_back(instance.dist.Sample(rng));
    }
    std::vector<UniverseIndex> neighbor = entries;
    // Adversarial single-entry replacement cycling through the probe atoms.
    neighbor[rng.NextBelow(n)] = atoms[probe % atoms.size()];
    Dataset s(std::move(entries));
    Dataset sprime(std::move(neighbor));
    ScoreVector a = BuildScores(family, s, instance, params);
    ScoreVector b = BuildScores(family, sprime, instance, params);
    declared = a.sensitivity;
    for (std::size_t i = 0; i < a.scores.size(); ++i) {
      worst = std::max(worst, std::abs(a.scores[i] - b.scores[i]));
    }
  }
  return FinishReport(std::string("sensitivity:") + FamilyName(family), worst,
                      declared, kSensitivityTolerance, pairs, master_seed);
}

AuditReport AuditGaussian(double l2_sensitivity, double epsilon, double delta) {
  const double actual = GaussianSigma(l2_sensitivity, epsilon, delta).sigma;
  const long double reference =
      (static_cast<long double>(l2_sensitivity) /
       static_cast<long double>(epsilon)) *
      sqrtl(2.0L * logl(1.25L / static_cast<long double>(delta)));
  const double rel = std::abs(static_cast<double>(
      (static_cast<long double>(actual) - reference) / reference));
  return FinishReport("gaussian-calibration", rel, 0.0, kCalibrationTolerance,
                      1, 0);
}

AuditReport AuditGaussianIdScale(std::uint64_t f_n, std::uint64_t n,
                                 double epsilon, double delta) {
  const double actual = IdNoiseSigma(f_n, n, epsilon, delta);
  const long double l2 = sqrtl(static_cast<long double>(f_n)) /
                         static_cast<long double>(n);
  const long double reference =
      (l2 / static_cast<long double>(epsilon)) *
      sqrtl(2.0L * logl(1.25L / static_cast<long double>(delta)));
  const double rel = std::abs(static_cast<double>(
      (static_cast<long double>(actual) - reference) / reference));
  return FinishReport("gaussian-calibration:identification", rel, 0.0,
                      kCalibrationTolerance, 1, 0);
}

}  // namespace dplang
