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

#ifndef DPLANG_LANGUAGE_HPP_
#define DPLANG_LANGUAGE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dplang/errors.hpp"

namespace dplang {

// Elements of the universe are identified purely by their 1-based position
// in the fixed enumeration u_1, u_2, ...; string payloads are a rendering.
using UniverseIndex = std::uint64_t;

std::string RenderElement(UniverseIndex k);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1000000;

// An indexed subset of the universe. Membership is total and deterministic;
// progression and finite-set kinds enumerate in closed form, predicate-kind
// languages enumerate by scanning up to an explicit cap.
class Language {
 public:
  enum class Kind { kProgression, kFiniteSet, kPredicate };

  // extras ∪ {offset + step*k : k >= 1}; step >= 1. Extras that coincide
  // with progression members are dropped during normalization.
  static Language Progression(std::uint64_t offset, std::uint64_t step,
                              std::vector<UniverseIndex> extras = {},
                              std::string label = "");
  static Language FiniteSet(std::vector<UniverseIndex> indices,
                            std::string label = "");
  static Language Predicate(std::function<bool(UniverseIndex)> fn,
                            std::uint64_t enumeration_cap =
                                kDefaultEnumerationCap,
                            std::string label = "");

  bool Contains(UniverseIndex k) const;

  // j-th smallest member index strictly above t (j >= 1). Throws
  // EnumerationExhausted when the language cannot produce it.
  UniverseIndex KthMemberAbove(std::uint64_t t, std::uint64_t j) const;

  // Sorted member indices <= t. Predicate-kind throws past its cap.
  std::vector<UniverseIndex> MembersUpTo(std::uint64_t t) const;

  // Number of members <= x (closed form for progression/finite kinds).
  std::uint64_t CountMembersUpTo(std::uint64_t x) const;

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  bool KnownInfinite() const { return kind_ == Kind::kProgression; }

  // Progression accessors (valid only for kProgression).
  std::uint64_t offset() const { return offset_; }
  std::uint64_t step() const { return step_; }
  const std::vector<UniverseIndex>& extras() const { return extras_; }
  // Finite-set accessor (valid only for kFiniteSet).
  const std::vector<UniverseIndex>& indices() const { return extras_; }
  std::uint64_t enumeration_cap() const { return cap_; }

 private:
  Language() = default;

  Kind kind_ = Kind::kFiniteSet;
  std::string label_;
  std::uint64_t offset_ = 0;
  std::uint64_t step_ = 1;
  std::vector<UniverseIndex> extras_;  // also holds finite-set indices
  std::function<bool(UniverseIndex)> fn_;
  std::uint64_t cap_ = kDefaultEnumerationCap;
};

// An ordered, materialized prefix of a language collection. Immutable after
// construction; safe to share across trial workers.
class Collection {
 public:
  explicit Collection(std::vector<Language> languages);

  // Materializes the first `count` languages of a generated collection
  // (generator is 1-based). Ordering is stable: the same generator yields
  // the same prefix regardless of `count`.
  static Collection Generate(
      const std::function<Language(std::uint64_t)>& generator,
      std::uint64_t count);

  std::uint64_t size() const { return languages_.size(); }
  // 1-based access.
  const Language& At(std::uint64_t i) const;
  // Exactly m languages in index order; throws InstanceError when fewer
  // than m are materialized.
  std::vector<const Language*> Prefix(std::uint64_t m) const;
  // Candidate horizon for a schedule value: min(f_n, size).
  std::uint64_t HorizonCap(std::uint64_t f_n) const;

 private:
  std::vector<Language> languages_;
};

class Distribution;  // defined in distribution.hpp

inline constexpr std::uint64_t kDefaultWitnessScanLimit = 10000;

// Smallest i such that every language in the prefix not contained in
// supp(D) has a member outside supp(D) at position <= i. Returns 1 when
// every language is contained (empty quantifier). Throws
// ScanLimitInconclusive when some language has no witness within
// scan_limit and containment cannot be decided exactly.
std::uint64_t WitnessIndex(const std::vector<const Language*>& prefix,
                           const Distribution& dist,
                           std::uint64_t scan_limit = kDefaultWitnessScanLimit);

}  // namespace dplang

#endif  // DPLANG_LANGUAGE_HPP_
