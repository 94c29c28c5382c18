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

#ifndef DPLANG_GENERATION_HPP_
#define DPLANG_GENERATION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dplang/instance.hpp"
#include "dplang/mechanisms.hpp"
#include "dplang/stats.hpp"

namespace dplang {

enum class GenMode { kPublic, kJoint, kApproximateJoint, kNonPrivate };

struct GenConfig {
  GenMode mode = GenMode::kPublic;
  std::uint64_t f_n = 1;
  std::uint64_t g_n = 1;
  std::uint64_t h_n = 1;           // joint modes
  std::uint64_t witness_bound = 1; // public mode
  PrivacyParams privacy;
};

// Prefix counts, deficits and scores. Public mode fills one score per
// language; joint modes fill a row-major (language, threshold) grid.
struct GenDiagnostics {
  std::uint64_t horizon = 0;  // min(f_n, |collection|)
  std::uint64_t thresholds = 0;  // h_n for joint modes, 1 for public
  // Member indices of each candidate language within the largest window.
  std::vector<std::vector<UniverseIndex>> prefix_members;
  std::vector<std::uint64_t> min_counts;  // aligned with scores
  std::vector<double> deficits;
  std::vector<double> scores;
  double declared_sensitivity = 1.0;
  // Approximate mode:
  double sigma = 0.0;
  std::vector<double> noisy_scores;
  // Selection and output:
  std::uint64_t selected_language = 0;
  std::uint64_t selected_threshold = 0;
  std::uint64_t novelty_rank = 0;  // public randomness draw
  UniverseIndex output = 0;
};

// Minimum multiplicity over the language's members with index <= t, or n
// when the window holds no member.
std::uint64_t MinPrefixCount(const Dataset& data, const Language& lang,
                             std::uint64_t t);

// Scores for the configured mode. Declared sensitivities: 1 for the public
// window score, h_n/g_n per coordinate for the pair score.
GenDiagnostics GenScores(const Dataset& data, const Collection& collection,
                         const GenConfig& cfg);

// Exponential-mechanism selection (language, or language-threshold pair)
// followed by emission of the novelty_rank-th member above the window. The
// rank is public randomness drawn from the same stream after the private
// selection, uniform on [min(2^n, 2^62)].
UniverseIndex DpGenerate(const Dataset& data, const Collection& collection,
                         const GenConfig& cfg, RandomStream& rng,
                         GenDiagnostics* diag = nullptr);

// Gaussian-noised pair scores followed by an argmax (ties broken by the
// lexicographically smallest pair) and the same emission step.
// noise_override is a test hook (row-major, one entry per pair).
UniverseIndex ApproxDpGenerate(const Dataset& data,
                               const Collection& collection,
                               const GenConfig& cfg, RandomStream& rng,
                               const std::vector<double>* noise_override =
                                   nullptr,
                               GenDiagnostics* diag = nullptr);

// Pointer baseline: per language, the smallest member not present in the
// sample; selects the language with the largest pointer (ties -> smallest
// language index) and returns its pointer element.
UniverseIndex NonPrivateGenerate(const Dataset& data,
                                 const Collection& collection,
                                 std::uint64_t f_n);

struct CoverageStats {
  std::vector<UniverseIndex> indices;  // reference-language members <= horizon
  double p_star = 1.0;                 // min mass; 1 by convention when empty
  bool vacuous = false;                // empty window: coverage always holds
};

// Members of the reference language within the window and their minimum
// mass. Throws NotContained when a member lies outside supp(D).
CoverageStats ComputeCoverageStats(const Distribution& dist,
                                   const Language& reference,
                                   std::uint64_t horizon);

struct GenBoundInputs {
  std::uint64_t f_n = 1;
  std::uint64_t g_n = 1;
  std::uint64_t h_n = 1;
  std::uint64_t coverage_count = 0;  // |I*|
  double p_star = 1.0;
};

// Closed-form generation error bound, clamped to 1. Defined for the three
// private modes only.
double GenErrorBound(std::uint64_t n, const GenBoundInputs& inputs,
                     const PrivacyParams& privacy, GenMode mode);

struct GenEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;  // output invalid or non-novel
  double failure_freq = 0.0;
  Interval wilson;
};

GenEstimate EstimateGenErr(const Instance& instance, const GenConfig& cfg,
                           std::uint64_t n, std::uint64_t trials,
                           std::uint64_t master_seed,
                           std::uint64_t stream_id = 0, unsigned threads = 0);

}  // namespace dplang

#endif  // DPLANG_GENERATION_HPP_
