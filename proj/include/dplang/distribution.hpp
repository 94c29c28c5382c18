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

#ifndef DPLANG_DISTRIBUTION_HPP_
#define DPLANG_DISTRIBUTION_HPP_

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dplang/language.hpp"
#include "dplang/random.hpp"

namespace dplang {

struct AtomMass {
  UniverseIndex index;
  double mass;
};

// Shared inverse-CDF branch of the anchor-plus-geometric family: a single
// uniform decides between the anchor (probability 3/4) and family member k
// (probability 2^-k / 4, k >= 1).
struct AnchorGeometricDraw {
  bool anchor;
  std::uint64_t k;  // valid when !anchor
};
AnchorGeometricDraw AnchorGeometricFromUniform(double u);

// A probability measure over universe indices with exact mass and support
// queries. Two kinds: a finite atom list, and the structured-geometric
// measure putting 3/4 on an anchor index and 2^-k/4 on the k-th member of
// an affine family k -> base + step*k.
class Distribution {
 public:
  enum class Kind { kFiniteAtoms, kStructuredGeometric };

  static Distribution FiniteAtoms(std::vector<AtomMass> atoms);
  static Distribution StructuredGeometric(UniverseIndex anchor,
                                          std::uint64_t family_base,
                                          std::uint64_t family_step);

  UniverseIndex Sample(RandomStream& rng) const;
  // Exact support membership; never relies on floating-point mass.
  bool InSupport(UniverseIndex k) const;
  // Point mass; for geometric family members this underflows to 0 beyond
  // k ~ 1074 while InSupport stays exact.
  double Mass(UniverseIndex k) const;

  // Whether every member of `lang` lies in the support. nullopt when this
  // cannot be decided exactly (predicate-kind languages past their cap).
  std::optional<bool> ContainsLanguage(const Language& lang) const;

  Kind kind() const { return kind_; }
  const std::vector<AtomMass>& atoms() const { return atoms_; }
  UniverseIndex anchor() const { return anchor_; }
  std::uint64_t family_base() const { return family_base_; }
  std::uint64_t family_step() const { return family_step_; }
  // Index of family member k (k >= 1); geometric kind only.
  UniverseIndex FamilyIndex(std::uint64_t k) const;

 private:
  Distribution() = default;

  Kind kind_ = Kind::kFiniteAtoms;
  std::vector<AtomMass> atoms_;       // finite kind; cumulative order as given
  UniverseIndex anchor_ = 1;          // geometric kind
  std::uint64_t family_base_ = 0;
  std::uint64_t family_step_ = 1;
};

// An ordered sample of universe indices with a cached multiplicity table.
class Dataset {
 public:
  explicit Dataset(std::vector<UniverseIndex> entries);

  std::uint64_t size() const { return entries_.size(); }
  const std::vector<UniverseIndex>& entries() const { return entries_; }
  std::uint64_t Multiplicity(UniverseIndex k) const;
  bool Contains(UniverseIndex k) const { return Multiplicity(k) > 0; }
  const std::unordered_map<UniverseIndex, std::uint64_t>& multiplicities()
      const {
    return multiplicity_;
  }

 private:
  std::vector<UniverseIndex> entries_;
  std::unordered_map<UniverseIndex, std::uint64_t> multiplicity_;
};

// n i.i.d. draws; deterministic given the stream state.
Dataset DrawDataset(const Distribution& dist, std::uint64_t n,
                    RandomStream& rng);

// Probability mass outside the language. Exact for finite-atom
// distributions and for geometric ones whose family membership pattern in
// the language is eventually constant; otherwise truncated at tail mass
// 1e-12 and flagged through `truncated`.
double PopulationErr(const Distribution& dist, const Language& lang,
                     bool* truncated = nullptr);

// Fraction of sample entries outside the language.
double EmpiricalErr(const Dataset& data, const Language& lang);

}  // namespace dplang

#endif  // DPLANG_DISTRIBUTION_HPP_
