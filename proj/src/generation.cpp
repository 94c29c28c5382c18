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

#include "dplang/generation.hpp"

#include <algorithm>
#include <cmath>

#include "dplang/parallel.hpp"

namespace dplang {

namespace {

// Collision probability with the sample stays below n / 2^62 under the cap.
std::uint64_t NoveltyRankBound(std::uint64_t n) {
  return n >= 62 ? (1ULL << 62) : (1ULL << n);
}

std::uint64_t MinCountOverMembers(const Dataset& data,
                                  const std::vector<UniverseIndex>& members,
                                  std::size_t count) {
  if (count == 0) return data.size();
  std::uint64_t best = data.Multiplicity(members[0]);
  for (std::size_t i = 1; i < count && best > 0; ++i) {
    best = std::min(best, data.Multiplicity(members[i]));
  }
  return best;
}

}  // namespace

std::uint64_t MinPrefixCount(const Dataset& data, const Language& lang,
                             std::uint64_t t) {
  std::vector<UniverseIndex> members = lang.MembersUpTo(t);
  return MinCountOverMembers(data, members, members.size());
}

GenDiagnostics GenScores(const Dataset& data, const Collection& collection,
                         const GenConfig& cfg) {
  if (cfg.f_n == 0 || cfg.g_n == 0) {
    throw InstanceError("schedules must evaluate to >= 1");
  }
  GenDiagnostics diag;
  diag.horizon = collection.HorizonCap(cfg.f_n);
  const double g = static_cast<double>(cfg.g_n);

  if (cfg.mode == GenMode::kPublic) {
    diag.thresholds = 1;
    diag.declared_sensitivity = 1.0;
    diag.prefix_members.reserve(diag.horizon);
    for (std::uint64_t i = 1; i <= diag.horizon; ++i) {
      diag.prefix_members.push_back(
          collection.At(i).MembersUpTo(cfg.witness_bound));
      std::uint64_t a = MinCountOverMembers(data, diag.prefix_members.back(),
                                            diag.prefix_members.back().size());
      double deficit = std::max(g - static_cast<double>(a), 0.0);
      diag.min_counts.push_back(a);
      diag.deficits.push_back(deficit);
      diag.scores.push_back(-deficit);
    }
    return diag;
  }

  if (cfg.h_n == 0) throw InstanceError("threshold horizon must be >= 1");
  diag.thresholds = cfg.h_n;
  const double h = static_cast<double>(cfg.h_n);
  diag.declared_sensitivity = h / g;
  diag.prefix_members.reserve(diag.horizon);
  for (std::uint64_t i = 1; i <= diag.horizon; ++i) {
    // Members up to the full threshold horizon; the window [1, t] is the
    // leading slice of this sorted list.
    diag.prefix_members.push_back(collection.At(i).MembersUpTo(cfg.h_n));
    const auto& members = diag.prefix_members.back();
    for (std::uint64_t t = 1; t <= cfg.h_n; ++t) {
      std::size_t in_window =
          std::upper_bound(members.begin(), members.end(), t) -
          members.begin();
      std::uint64_t a = MinCountOverMembers(data, members, in_window);
      double deficit = std::max(g - static_cast<double>(a), 0.0);
      diag.min_counts.push_back(a);
      diag.deficits.push_back(deficit);
      diag.scores.push_back(static_cast<double>(t) - (h / g) * deficit);
    }
  }
  return diag;
}

namespace {

UniverseIndex EmitAboveWindow(const Collection& collection,
                              std::uint64_t language, std::uint64_t window,
                              std::uint64_t n, RandomStream& rng,
                              GenDiagnostics& diag) {
  diag.selected_language = language;
  diag.selected_threshold = window;
  diag.novelty_rank = 1 + rng.NextBelow(NoveltyRankBound(n));
  diag.output =
      collection.At(language).KthMemberAbove(window, diag.novelty_rank);
  return diag.output;
}

}  // namespace

UniverseIndex DpGenerate(const Dataset& data, const Collection& collection,
                         const GenConfig& cfg, RandomStream& rng,
                         GenDiagnostics* diag) {
  if (cfg.mode != GenMode::kPublic && cfg.mode != GenMode::kJoint) {
    throw InstanceError("DpGenerate handles the public and joint modes");
  }
  GenDiagnostics local = GenScores(data, collection, cfg);
  ScoreVector sv{local.scores, local.declared_sensitivity,
                 SensitivityKind::kPerCoordinate};
  std::size_t pick = ExpMechSample(sv, cfg.privacy.epsilon, rng);
  std::uint64_t language, window;
  if (cfg.mode == GenMode::kPublic) {
    language = pick + 1;
    window = cfg.witness_bound;
  } else {
    language = pick / cfg.h_n + 1;
    window = pick % cfg.h_n + 1;
  }
  UniverseIndex out =
      EmitAboveWindow(collection, language, window, data.size(), rng, local);
  if (diag != nullptr) *diag = std::move(local);
  return out;
}

UniverseIndex ApproxDpGenerate(const Dataset& data,
                               const Collection& collection,
                               const GenConfig& cfg, RandomStream& rng,
                               const std::vector<double>* noise_override,
                               GenDiagnostics* diag) {
  if (cfg.mode != GenMode::kApproximateJoint) {
    throw InstanceError("ApproxDpGenerate handles the approximate-joint mode");
  }
  GenConfig joint = cfg;
  joint.mode = GenMode::kJoint;
  GenDiagnostics local = GenScores(data, collection, joint);
  const double f = static_cast<double>(cfg.f_n);
  const double h = static_cast<double>(cfg.h_n);
  const double l2 = local.declared_sensitivity * std::sqrt(f * h);
  local.sigma = GaussianSigma(l2, cfg.privacy.epsilon, cfg.privacy.delta).sigma;
  local.noisy_scores = local.scores;
  if (noise_override != nullptr) {
    if (noise_override->size() != local.noisy_scores.size()) {
      throw InstanceError("noise override size must match the score grid");
    }
    for (std::size_t i = 0; i < local.noisy_scores.size(); ++i) {
      local.noisy_scores[i] += (*noise_override)[i];
    }
  } else {
    AddGaussianNoise(local.noisy_scores, local.sigma, rng);
  }
  // Row-major scan with strict comparison = lexicographically smallest
  // maximizing pair.
  std::size_t best = 0;
  for (std::size_t i = 1; i < local.noisy_scores.size(); ++i) {
    if (local.noisy_scores[i] > local.noisy_scores[best]) best = i;
  }
  std::uint64_t language = best / cfg.h_n + 1;
  std::uint64_t window = best % cfg.h_n + 1;
  UniverseIndex out =
      EmitAboveWindow(collection, language, window, data.size(), rng, local);
  if (diag != nullptr) *diag = std::move(local);
  return out;
}

UniverseIndex NonPrivateGenerate(const Dataset& data,
                                 const Collection& collection,
                                 std::uint64_t f_n) {
  if (f_n == 0) throw InstanceError("candidate horizon must be >= 1");
  const std::uint64_t horizon = collection.HorizonCap(f_n);
  std::uint64_t best_language = 1;
  UniverseIndex best_pointer = 0;
  UniverseIndex best_element = 0;
  for (std::uint64_t i = 1; i <= horizon; ++i) {
    const Language& lang = collection.At(i);
    // Advance past every sampled member.
    UniverseIndex pointer = lang.KthMemberAbove(0, 1);
    while (data.Contains(pointer)) {
      pointer = lang.KthMemberAbove(pointer, 1);
    }
    if (pointer > best_pointer) {
      best_pointer = pointer;
      best_language = i;
      best_element = pointer;
    }
  }
  (void)best_language;
  return best_element;
}

CoverageStats ComputeCoverageStats(const Distribution& dist,
                                   const Language& reference,
                                   std::uint64_t horizon) {
  if (horizon == 0) throw InstanceError("coverage horizon must be >= 1");
  CoverageStats stats;
  stats.indices = reference.MembersUpTo(horizon);
  if (stats.indices.empty()) {
    stats.vacuous = true;  // empty minimum: coverage holds trivially
    stats.p_star = 1.0;
    return stats;
  }
  double p = 1.0;
  for (UniverseIndex k : stats.indices) {
    if (!dist.InSupport(k)) {
      throw NotContained("reference member " + RenderElement(k) +
                         " lies outside the support");
    }
    p = std::min(p, dist.Mass(k));
  }
  stats.p_star = p;
  return stats;
}

double GenErrorBound(std::uint64_t n, const GenBoundInputs& in,
                     const PrivacyParams& privacy, GenMode mode) {
  const double nn = static_cast<double>(n);
  const double f = static_cast<double>(in.f_n);
  const double g = static_cast<double>(in.g_n);
  const double h = static_cast<double>(in.h_n);
  const double coverage = static_cast<double>(in.coverage_count) *
                          std::exp(-nn * in.p_star / 8.0);
  const double collision = std::exp(-nn / 2.0);
  double priv = 0.0;
  switch (mode) {
    case GenMode::kPublic:
      priv = f * std::exp(-privacy.epsilon * g / 4.0);
      break;
    case GenMode::kJoint:
      priv = f * h * std::exp(-privacy.epsilon * g / 8.0);
      break;
    case GenMode::kApproximateJoint: {
      if (!(privacy.delta > 0.0 && privacy.delta < 1.0)) {
        throw InvalidDelta("approximate mode requires delta in (0, 1)");
      }
      const double denom = 256.0 * f * h * std::log(1.25 / privacy.delta);
      priv = 2.0 * f * h *
             std::exp(-privacy.epsilon * privacy.epsilon * g * g / denom);
      break;
    }
    case GenMode::kNonPrivate:
      throw Error("no closed-form bound for the non-private baseline");
  }
  return std::min(1.0, coverage + priv + collision);
}

namespace {

struct GenPartial {
  std::uint64_t failures = 0;
  void MergeFrom(const GenPartial& other) { failures += other.failures; }
};

}  // namespace

GenEstimate EstimateGenErr(const Instance& instance, const GenConfig& cfg,
                           std::uint64_t n, std::uint64_t trials,
                           std::uint64_t master_seed, std::uint64_t stream_id,
                           unsigned threads) {
  if (trials == 0) throw InstanceError("trial count must be >= 1");
  GenPartial total = ParallelAccumulate<GenPartial>(
      trials, threads, [&](std::uint64_t trial, GenPartial& acc) {
        RandomStream rng(MixSeed(master_seed, stream_id, trial));
        Dataset data = DrawDataset(instance.dist, n, rng);
        UniverseIndex out = 0;
        switch (cfg.mode) {
          case GenMode::kPublic:
          case GenMode::kJoint:
            out = DpGenerate(data, instance.collection, cfg, rng);
            break;
          case GenMode::kApproximateJoint:
            out = ApproxDpGenerate(data, instance.collection, cfg, rng);
            break;
          case GenMode::kNonPrivate:
            out = NonPrivateGenerate(data, instance.collection, cfg.f_n);
            break;
        }
        if (!instance.dist.InSupport(out) || data.Contains(out)) {
          ++acc.failures;
        }
      });

  GenEstimate est;
  est.trials = trials;
  est.failures = total.failures;
  est.failure_freq =
      static_cast<double>(total.failures) / static_cast<double>(trials);
  est.wilson = WilsonInterval(total.failures, trials);
  return est;
}

}  // namespace dplang
