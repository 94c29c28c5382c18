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

#include "dplang/hardness.hpp"

#include <algorithm>
#include <cmath>

#include "dplang/parallel.hpp"

namespace dplang {

namespace {

Collection BuiltinPair() {
  return Collection({Language::Progression(0, 3, {1}, "L"),
                     Language::Progression(1, 3, {1}, "L'")});
}

void CheckPrivateElement(const Collection& c, UniverseIndex e,
                         std::uint64_t owner) {
  for (std::uint64_t i = 1; i <= c.size(); ++i) {
    bool member = c.At(i).Contains(e);
    if (i == owner ? !member : member) {
      throw InstanceError(RenderElement(e) + " is not private to language " +
                          std::to_string(owner));
    }
  }
}

}  // namespace

bool HardInstance::InFamilyA(UniverseIndex k) const {
  if (variant == HardVariant::kIpp) return k == s1;
  return k > d.family_base() && (k - d.family_base()) % d.family_step() == 0;
}

bool HardInstance::InFamilyB(UniverseIndex k) const {
  if (variant == HardVariant::kIpp) return k == s2;
  return k > dprime.family_base() &&
         (k - dprime.family_base()) % dprime.family_step() == 0;
}

Instance HardInstance::Side(bool prime) const {
  const char* base = variant == HardVariant::kIpp ? "ipp" : "iidp";
  return MakeInstance(collection, prime ? dprime : d,
                      std::string(base) + (prime ? "-dprime" : "-d"));
}

HardInstance MakeHardInstance(HardVariant variant) {
  Collection collection = BuiltinPair();
  const UniverseIndex s0 = 1, s1 = 3, s2 = 4;
  Distribution d =
      variant == HardVariant::kIpp
          ? Distribution::FiniteAtoms({{s0, 0.75}, {s1, 0.25}})
          : Distribution::StructuredGeometric(s0, 0, 3);
  Distribution dprime =
      variant == HardVariant::kIpp
          ? Distribution::FiniteAtoms({{s0, 0.75}, {s2, 0.25}})
          : Distribution::StructuredGeometric(s0, 1, 3);
  HardInstance inst{variant, std::move(collection), std::move(d),
                    std::move(dprime), s0, s1, s2};

  // Construction-time verification of every structural invariant.
  if (!inst.collection.At(1).Contains(s0) || !inst.collection.At(2).Contains(s0)) {
    throw InstanceError("shared element must lie in both languages");
  }
  CheckPrivateElement(inst.collection, s1, 1);
  CheckPrivateElement(inst.collection, s2, 2);
  if (variant == HardVariant::kIidp) {
    for (std::uint64_t k = 1; k <= 64; ++k) {
      UniverseIndex a = inst.d.FamilyIndex(k);
      UniverseIndex b = inst.dprime.FamilyIndex(k);
      if (!inst.collection.At(1).Contains(a) ||
          inst.collection.At(2).Contains(a) ||
          !inst.collection.At(2).Contains(b) ||
          inst.collection.At(1).Contains(b)) {
        throw InstanceError("family elements must be private to their side");
      }
      if (inst.dprime.InSupport(a) || inst.d.InSupport(b)) {
        throw InstanceError("private families must avoid the opposite support");
      }
    }
  }
  return inst;
}

CoupledSample CoupledDraw(const HardInstance& inst, std::uint64_t n,
                          RandomStream& rng) {
  if (n == 0) throw InstanceError("sample size must be >= 1");
  std::vector<UniverseIndex> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  std::uint64_t hamming = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const double u = rng.NextUniform();
    if (inst.variant == HardVariant::kIpp) {
      if (u < 0.75) {
        xs.push_back(inst.s0);
        ys.push_back(inst.s0);
      } else {
        xs.push_back(inst.s1);
        ys.push_back(inst.s2);
        ++hamming;
      }
    } else {
      AnchorGeometricDraw draw = AnchorGeometricFromUniform(u);
      if (draw.anchor) {
        xs.push_back(inst.s0);
        ys.push_back(inst.s0);
      } else {
        xs.push_back(inst.d.FamilyIndex(draw.k));
        ys.push_back(inst.dprime.FamilyIndex(draw.k));
        ++hamming;
      }
    }
  }
  return {Dataset(std::move(xs)), Dataset(std::move(ys)), hamming};
}

LowerBoundValue LbValue(LbTask task, std::uint64_t n, double epsilon) {
  if (n < 2) throw InstanceError("lower bounds require n >= 2");
  if (epsilon < 0.0) throw InstanceError("epsilon must be nonnegative");
  const double nn = static_cast<double>(n);
  const double denom = 1.0 + std::exp(epsilon * nn / 2.0);
  LowerBoundValue lb;
  if (task == LbTask::kIdentify) {
    lb.value = (1.0 - std::exp(-nn / 12.0)) / denom;
    lb.simplified = std::exp(-epsilon * nn / 2.0) / 30.0;
  } else {
    lb.value =
        (1.0 - std::pow(4.0, -nn) - std::exp(-nn / 12.0)) / denom;
  }
  return lb;
}

namespace {

struct ArmPartial {
  std::uint64_t target_hits = 0;  // identify: A(S) == target language
  std::uint64_t failures = 0;     // generate: invalid-or-stale outputs
  std::uint64_t family_hits = 0;  // generate: output ∈ F
  void MergeFrom(const ArmPartial& other) {
    target_hits += other.target_hits;
    failures += other.failures;
    family_hits += other.family_hits;
  }
};

double OneSidedHalf(std::uint64_t count, std::uint64_t trials) {
  const double freq =
      static_cast<double>(count) / static_cast<double>(trials);
  return freq - WilsonInterval(count, trials, kZ95OneSided).low;
}

}  // namespace

LbCheckReport EmpiricalLbCheck(const HardInstance& inst,
                               const LbAlgorithmConfig& algo, std::uint64_t n,
                               double epsilon, std::uint64_t trials,
                               std::uint64_t master_seed, unsigned threads) {
  LbCheckReport report;
  report.task = algo.task;
  report.n = n;
  report.epsilon = epsilon;
  report.trials = trials;
  LowerBoundValue lb = LbValue(algo.task, n, epsilon);
  report.lower_bound = lb.value;
  report.lb_simplified = lb.simplified;

  if (algo.task == LbTask::kIdentify) {
    if (inst.variant != HardVariant::kIpp) {
      throw InstanceError("identification lower bound targets the IPP pair");
    }
    if (algo.id.mechanism == IdMechanism::kNonPrivate) {
      report.applicable = false;
      return report;
    }
    IdConfig cfg = algo.id;
    cfg.privacy.epsilon = epsilon;
    for (int arm = 0; arm < 2; ++arm) {
      const bool prime = arm == 1;
      const Distribution& dist = prime ? inst.dprime : inst.d;
      const std::uint64_t target = prime ? 2 : 1;
      ArmPartial total = ParallelAccumulate<ArmPartial>(
          trials, threads, [&](std::uint64_t trial, ArmPartial& acc) {
            RandomStream rng(
                MixSeed(master_seed, static_cast<std::uint64_t>(arm), trial));
            Dataset data = DrawDataset(dist, n, rng);
            std::uint64_t selected =
                cfg.mechanism == IdMechanism::kPure
                    ? PureDpIdentify(data, inst.collection, cfg, rng)
                    : ApproxDpIdentify(data, inst.collection, cfg, rng);
            if (selected == target) ++acc.target_hits;
          });
      const double hit_freq =
          static_cast<double>(total.target_hits) / static_cast<double>(trials);
      if (!prime) {
        report.p_hat = hit_freq;
        report.failures_d = trials - total.target_hits;
      } else {
        report.q_hat = hit_freq;
        report.failures_dprime = trials - total.target_hits;
      }
    }
    const std::uint64_t max_misses =
        std::max(report.failures_d, report.failures_dprime);
    report.statistic =
        static_cast<double>(max_misses) / static_cast<double>(trials);
    report.ci_half = OneSidedHalf(max_misses, trials);
    report.pass = report.statistic >= report.lower_bound - report.ci_half;
    return report;
  }

  if (inst.variant != HardVariant::kIidp) {
    throw InstanceError("generation lower bound targets the IIDP pair");
  }
  if (algo.gen.mode == GenMode::kNonPrivate) {
    report.applicable = false;
    return report;
  }
  GenConfig cfg = algo.gen;
  cfg.privacy.epsilon = epsilon;
  for (int arm = 0; arm < 2; ++arm) {
    const bool prime = arm == 1;
    const Distribution& dist = prime ? inst.dprime : inst.d;
    ArmPartial total = ParallelAccumulate<ArmPartial>(
        trials, threads, [&](std::uint64_t trial, ArmPartial& acc) {
          RandomStream rng(
              MixSeed(master_seed, static_cast<std::uint64_t>(arm), trial));
          Dataset data = DrawDataset(dist, n, rng);
          UniverseIndex out =
              cfg.mode == GenMode::kApproximateJoint
                  ? ApproxDpGenerate(data, inst.collection, cfg, rng)
                  : DpGenerate(data, inst.collection, cfg, rng);
          if (!dist.InSupport(out) || data.Contains(out)) ++acc.failures;
          if (inst.InFamilyA(out)) ++acc.family_hits;
        });
    const double fail_freq =
        static_cast<double>(total.failures) / static_cast<double>(trials);
    const double family_freq =
        static_cast<double>(total.family_hits) / static_cast<double>(trials);
    if (!prime) {
      report.alpha_d = fail_freq;
      report.f_freq_d = family_freq;
      report.failures_d = total.failures;
      report.chain_success_pass =
          family_freq >= 1.0 - fail_freq - std::pow(4.0, -double(n)) -
                             (OneSidedHalf(total.family_hits, trials) +
                              OneSidedHalf(total.failures, trials));
    } else {
      report.alpha_dprime = fail_freq;
      report.f_freq_dprime = family_freq;
      report.failures_dprime = total.failures;
      report.chain_failure_pass =
          family_freq <= fail_freq + OneSidedHalf(total.family_hits, trials) +
                             OneSidedHalf(total.failures, trials);
    }
  }
  const std::uint64_t max_failures =
      std::max(report.failures_d, report.failures_dprime);
  report.statistic =
      static_cast<double>(max_failures) / static_cast<double>(trials);
  report.ci_half = OneSidedHalf(max_failures, trials);
  report.pass = report.chain_success_pass && report.chain_failure_pass &&
                report.statistic >= report.lower_bound - report.ci_half;
  return report;
}

}  // namespace dplang
