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

#ifndef DPLANG_HARDNESS_HPP_
#define DPLANG_HARDNESS_HPP_

#include <cstdint>
#include <optional>

#include "dplang/generation.hpp"
#include "dplang/identification.hpp"
#include "dplang/instance.hpp"

namespace dplang {

enum class HardVariant { kIpp, kIidp };

// A bundled pair of distributions over a two-language collection whose
// private elements force any sufficiently private algorithm to err on at
// least one side. The built-in collection is L = {1} ∪ {3k : k >= 1},
// L' = {1} ∪ {3k+1 : k >= 1}.
struct HardInstance {
  HardVariant variant;
  Collection collection;  // {L, L'}
  Distribution d;         // optimal language: index 1
  Distribution dprime;    // optimal language: index 2
  UniverseIndex s0;       // shared element
  UniverseIndex s1;       // private to L  (first private element for kIidp)
  UniverseIndex s2;       // private to L' (first private element for kIidp)

  // Membership in the private families F = {a_k} and F' = {b_k}
  // (kIidp only; singleton {s1} / {s2} for kIpp).
  bool InFamilyA(UniverseIndex k) const;
  bool InFamilyB(UniverseIndex k) const;

  // Ground-truth experiment instance for one side of the pair.
  Instance Side(bool prime) const;
};

HardInstance MakeHardInstance(HardVariant variant);

struct CoupledSample {
  Dataset s;       // marginally D^n
  Dataset sprime;  // marginally D'^n
  std::uint64_t hamming;
};

// Coordinate-wise maximal coupling: with probability 3/4 both coordinates
// share s0; otherwise the IPP pair emits (s1, s2) and the IIDP pair draws a
// geometric level k and emits (a_k, b_k).
CoupledSample CoupledDraw(const HardInstance& inst, std::uint64_t n,
                          RandomStream& rng);

enum class LbTask { kIdentify, kGenerate };

struct LowerBoundValue {
  double value = 0.0;                // the exact-form bound
  std::optional<double> simplified;  // identification only
};

// Closed-form lower bounds on the error any eps-DP algorithm must incur on
// the hard pair (n >= 2).
LowerBoundValue LbValue(LbTask task, std::uint64_t n, double epsilon);

struct LbAlgorithmConfig {
  LbTask task = LbTask::kIdentify;
  IdConfig id;    // used when task == kIdentify
  GenConfig gen;  // used when task == kGenerate
};

struct LbCheckReport {
  bool applicable = true;  // false for non-private algorithms
  LbTask task = LbTask::kIdentify;
  std::uint64_t n = 0;
  double epsilon = 0.0;
  std::uint64_t trials = 0;
  double lower_bound = 0.0;  // LbValue(...).value
  std::optional<double> lb_simplified;
  double statistic = 0.0;    // max misidentification / generation error
  double ci_half = 0.0;      // one-sided 95% half-width of the max arm
  bool pass = true;

  // Identification arms:
  double p_hat = 0.0;  // Pr[A(S) = L] under D
  double q_hat = 0.0;  // Pr[A(S') = L'] under D'
  std::uint64_t failures_d = 0;
  std::uint64_t failures_dprime = 0;

  // Generation arms:
  double alpha_d = 0.0;       // GenErr frequency under D
  double alpha_dprime = 0.0;  // GenErr frequency under D'
  double f_freq_d = 0.0;      // Pr[A(S) ∈ F] under D
  double f_freq_dprime = 0.0; // Pr[A(S') ∈ F] under D'
  bool chain_success_pass = true;   // Pr[A(S) ∈ F] >= 1 - alpha_D - 4^-n - CI
  bool chain_failure_pass = true;   // Pr[A(S') ∈ F] <= alpha_D' + CI
};

// Runs the configured algorithm on both sides of the pair and checks the
// empirical error frequencies against the closed-form lower bound (plus,
// for generation, the success/failure chain through the private family F).
LbCheckReport EmpiricalLbCheck(const HardInstance& inst,
                               const LbAlgorithmConfig& algo, std::uint64_t n,
                               double epsilon, std::uint64_t trials,
                               std::uint64_t master_seed, unsigned threads = 0);

}  // namespace dplang

#endif  // DPLANG_HARDNESS_HPP_
