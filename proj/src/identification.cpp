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

#include "dplang/identification.hpp"

#include <algorithm>
#include <cmath>

#include "dplang/parallel.hpp"

namespace dplang {

namespace {

// Largest index with margin strictly above 2/f_n; 0 when none passes.
std::uint64_t LargestPassing(const std::vector<double>& margins,
                             std::uint64_t f_n) {
  const double threshold = 2.0 / static_cast<double>(f_n);
  for (std::uint64_t i = margins.size(); i >= 1; --i) {
    if (margins[i - 1] > threshold) return i;
  }
  return 0;
}

std::vector<double> MarginsOf(const std::vector<double>& errs) {
  std::vector<double> margins(errs.size());
  if (!errs.empty()) margins[0] = 1.0;
  double min_predecessor = errs.empty() ? 0.0 : errs[0];
  for (std::size_t i = 1; i < errs.size(); ++i) {
    margins[i] = min_predecessor - errs[i];
    min_predecessor = std::min(min_predecessor, errs[i]);
  }
  return margins;
}

}  // namespace

IdDiagnostics MarginAndScore(const Dataset& data, const Collection& collection,
                             std::uint64_t f_n) {
  if (f_n == 0) throw InstanceError("candidate horizon must be >= 1");
  IdDiagnostics diag;
  diag.f_n = f_n;
  diag.horizon = collection.HorizonCap(f_n);
  const double f = static_cast<double>(f_n);
  diag.empirical_errs.reserve(diag.horizon);
  for (std::uint64_t i = 1; i <= diag.horizon; ++i) {
    diag.empirical_errs.push_back(EmpiricalErr(data, collection.At(i)));
  }
  diag.margins = MarginsOf(diag.empirical_errs);
  diag.deficits.resize(diag.horizon);
  diag.scores.resize(diag.horizon);
  for (std::uint64_t i = 0; i < diag.horizon; ++i) {
    diag.deficits[i] = std::max(2.0 / f - diag.margins[i], 0.0);
    diag.scores[i] = static_cast<double>(i + 1) - f * f * diag.deficits[i];
  }
  return diag;
}

ScoreVector IdScoreVector(const Dataset& data, const Collection& collection,
                          std::uint64_t f_n) {
  IdDiagnostics diag = MarginAndScore(data, collection, f_n);
  const double f = static_cast<double>(f_n);
  return ScoreVector{std::move(diag.scores),
                     2.0 * f * f / static_cast<double>(data.size()),
                     SensitivityKind::kPerCoordinate};
}

double IdNoiseSigma(std::uint64_t f_n, std::uint64_t n, double epsilon,
                    double delta) {
  const double l2 = std::sqrt(static_cast<double>(f_n)) /
                    static_cast<double>(n);
  return GaussianSigma(l2, epsilon, delta).sigma;
}

std::uint64_t PureDpIdentify(const Dataset& data, const Collection& collection,
                             const IdConfig& cfg, RandomStream& rng,
                             IdDiagnostics* diag) {
  IdDiagnostics local = MarginAndScore(data, collection, cfg.f_n);
  const double f = static_cast<double>(cfg.f_n);
  ScoreVector sv{local.scores, 2.0 * f * f / static_cast<double>(data.size()),
                 SensitivityKind::kPerCoordinate};
  std::uint64_t selected = ExpMechSample(sv, cfg.privacy.epsilon, rng) + 1;
  if (diag != nullptr) *diag = std::move(local);
  return selected;
}

std::uint64_t ApproxDpIdentify(const Dataset& data,
                               const Collection& collection,
                               const IdConfig& cfg, RandomStream& rng,
                               const std::vector<double>* noise_override,
                               IdDiagnostics* diag) {
  IdDiagnostics local = MarginAndScore(data, collection, cfg.f_n);
  local.sigma = IdNoiseSigma(cfg.f_n, data.size(), cfg.privacy.epsilon,
                             cfg.privacy.delta);
  local.noisy_errs = local.empirical_errs;
  if (noise_override != nullptr) {
    if (noise_override->size() != local.noisy_errs.size()) {
      throw InstanceError("noise override size must match the horizon");
    }
    for (std::size_t i = 0; i < local.noisy_errs.size(); ++i) {
      local.noisy_errs[i] += (*noise_override)[i];
    }
  } else {
    AddGaussianNoise(local.noisy_errs, local.sigma, rng);
  }
  local.noisy_margins = MarginsOf(local.noisy_errs);
  std::uint64_t selected = LargestPassing(local.noisy_margins, cfg.f_n);
  if (selected == 0) selected = 1;  // possible only when f_n <= 2
  if (diag != nullptr) *diag = std::move(local);
  return selected;
}

std::uint64_t NonPrivateIdentify(const Dataset& data,
                                 const Collection& collection,
                                 std::uint64_t f_n) {
  IdDiagnostics diag = MarginAndScore(data, collection, f_n);
  std::uint64_t selected = LargestPassing(diag.margins, f_n);
  return selected == 0 ? 1 : selected;
}

double IdErrorBound(std::uint64_t n, std::uint64_t f_n,
                    const PrivacyParams& privacy, IdMechanism mechanism) {
  const double nn = static_cast<double>(n);
  const double f = static_cast<double>(f_n);
  const double statistical = 2.0 * f * std::exp(-nn / (8.0 * f * f));
  double priv = 0.0;
  switch (mechanism) {
    case IdMechanism::kPure:
      priv = f * std::exp(-privacy.epsilon * nn / (8.0 * f * f));
      break;
    case IdMechanism::kApproximate: {
      if (!(privacy.delta > 0.0 && privacy.delta < 1.0)) {
        throw InvalidDelta("approximate mechanism requires delta in (0, 1)");
      }
      const double denom =
          64.0 * f * f * f * std::log(1.25 / privacy.delta);
      priv = 2.0 * f *
             std::exp(-privacy.epsilon * privacy.epsilon * nn * nn / denom);
      break;
    }
    case IdMechanism::kNonPrivate:
      throw Error("no closed-form bound for the non-private baseline");
  }
  return std::min(1.0, statistical + priv);
}

namespace {

struct IdPartial {
  std::uint64_t failures = 0;
  double excess_sum = 0.0;
  void MergeFrom(const IdPartial& other) {
    failures += other.failures;
    excess_sum += other.excess_sum;
  }
};

}  // namespace

IdEstimate EstimateIdErr(const Instance& instance, const IdConfig& cfg,
                         std::uint64_t n, std::uint64_t trials,
                         std::uint64_t master_seed, std::uint64_t stream_id,
                         unsigned threads) {
  if (trials == 0) throw InstanceError("trial count must be >= 1");
  IdPartial total = ParallelAccumulate<IdPartial>(
      trials, threads, [&](std::uint64_t trial, IdPartial& acc) {
        RandomStream rng(MixSeed(master_seed, stream_id, trial));
        Dataset data = DrawDataset(instance.dist, n, rng);
        std::uint64_t selected = 0;
        switch (cfg.mechanism) {
          case IdMechanism::kPure:
            selected = PureDpIdentify(data, instance.collection, cfg, rng);
            break;
          case IdMechanism::kApproximate:
            selected = ApproxDpIdentify(data, instance.collection, cfg, rng);
            break;
          case IdMechanism::kNonPrivate:
            selected = NonPrivateIdentify(data, instance.collection, cfg.f_n);
            break;
        }
        if (selected != instance.optimal_index) ++acc.failures;
        acc.excess_sum += instance.ExcessRisk(selected);
      });

  IdEstimate est;
  est.trials = trials;
  est.failures = total.failures;
  est.misid_freq =
      static_cast<double>(total.failures) / static_cast<double>(trials);
  est.wilson = WilsonInterval(total.failures, trials);
  est.iderr_estimate = total.excess_sum / static_cast<double>(trials);
  if (cfg.mechanism != IdMechanism::kNonPrivate) {
    est.bound = IdErrorBound(n, cfg.f_n, cfg.privacy, cfg.mechanism);
  }
  return est;
}

}  // namespace dplang
