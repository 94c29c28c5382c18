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

#include "dplang/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dplang {

namespace {

using u128 = unsigned __int128;

constexpr double kMassSumTolerance = 1e-12;
// Explicit family terms summed before truncating; the dropped tail mass is
// at most 2^-(kTruncationDepth+1) < 1e-13.
constexpr std::uint64_t kTruncationDepth = 48;

double FamilyMass(std::uint64_t k) {
  // 2^-k / 4; underflows to 0 for k beyond the double range.
  if (k + 2 > 1074) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(k) - 2);
}

}  // namespace

AnchorGeometricDraw AnchorGeometricFromUniform(double u) {
  if (u < 0.75) return {true, 0};
  // Inverse CDF of the geometric half: k = ceil(-log2(4(1-u))), clamped.
  double v = -std::log2(4.0 * (1.0 - u));
  std::uint64_t k = v <= 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(v));
  if (k == 0) k = 1;
  return {false, k};
}

Distribution Distribution::FiniteAtoms(std::vector<AtomMass> atoms) {
  if (atoms.empty()) throw InstanceError("distribution needs at least one atom");
  double total = 0.0;
  for (const AtomMass& a : atoms) {
    if (a.index == 0) throw InstanceError("universe indices start at 1");
    if (a.mass < 0.0) throw InstanceError("atom masses must be nonnegative");
    total += a.mass;
  }
  if (std::abs(total - 1.0) > kMassSumTolerance) {
    throw InstanceError("atom masses must sum to 1 within 1e-12");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i].index == atoms[j].index) {
        throw InstanceError("duplicate atom index");
      }
    }
  }
  Distribution d;
  d.kind_ = Kind::kFiniteAtoms;
  d.atoms_ = std::move(atoms);
  return d;
}

Distribution Distribution::StructuredGeometric(UniverseIndex anchor,
                                               std::uint64_t family_base,
                                               std::uint64_t family_step) {
  if (anchor == 0) throw InstanceError("universe indices start at 1");
  if (family_step == 0) throw InstanceError("family step must be >= 1");
  if (family_base + family_step == 0) {
    throw InstanceError("smallest family member must be >= 1");
  }
  bool anchor_in_family = anchor > family_base &&
                          (anchor - family_base) % family_step == 0;
  if (anchor_in_family) {
    throw InstanceError("anchor must not coincide with a family member");
  }
  Distribution d;
  d.kind_ = Kind::kStructuredGeometric;
  d.anchor_ = anchor;
  d.family_base_ = family_base;
  d.family_step_ = family_step;
  return d;
}

UniverseIndex Distribution::FamilyIndex(std::uint64_t k) const {
  u128 idx = u128(family_base_) + u128(family_step_) * k;
  if (idx > std::numeric_limits<std::uint64_t>::max()) {
    throw EnumerationExhausted("family member index exceeds the universe range");
  }
  return static_cast<UniverseIndex>(idx);
}

UniverseIndex Distribution::Sample(RandomStream& rng) const {
  if (kind_ == Kind::kFiniteAtoms) {
    double u = rng.NextUniform();
    double acc = 0.0;
    for (const AtomMass& a : atoms_) {
      acc += a.mass;
      if (u < acc) return a.index;
    }
    return atoms_.back().index;  // floating-point remainder
  }
  AnchorGeometricDraw draw = AnchorGeometricFromUniform(rng.NextUniform());
  return draw.anchor ? anchor_ : FamilyIndex(draw.k);
}

bool Distribution::InSupport(UniverseIndex k) const {
  if (kind_ == Kind::kFiniteAtoms) {
    for (const AtomMass& a : atoms_) {
      if (a.index == k && a.mass > 0.0) return true;
    }
    return false;
  }
  if (k == anchor_) return true;
  return k > family_base_ && (k - family_base_) % family_step_ == 0;
}

double Distribution::Mass(UniverseIndex k) const {
  if (kind_ == Kind::kFiniteAtoms) {
    for (const AtomMass& a : atoms_) {
      if (a.index == k) return a.mass;
    }
    return 0.0;
  }
  if (k == anchor_) return 0.75;
  if (k > family_base_ && (k - family_base_) % family_step_ == 0) {
    return FamilyMass((k - family_base_) / family_step_);
  }
  return 0.0;
}

std::optional<bool> Distribution::ContainsLanguage(const Language& lang) const {
  if (kind_ == Kind::kFiniteAtoms) {
    switch (lang.kind()) {
      case Language::Kind::kProgression:
        return false;  // infinite language, finite support
      case Language::Kind::kFiniteSet: {
        for (UniverseIndex e : lang.indices()) {
          if (!InSupport(e)) return false;
        }
        return true;
      }
      case Language::Kind::kPredicate: {
        for (UniverseIndex k = 1; k <= lang.enumeration_cap(); ++k) {
          if (lang.Contains(k) && !InSupport(k)) return false;
        }
        return std::nullopt;  // undecided past the cap
      }
    }
  }
  switch (lang.kind()) {
    case Language::Kind::kFiniteSet: {
      for (UniverseIndex e : lang.indices()) {
        if (!InSupport(e)) return false;
      }
      return true;
    }
    case Language::Kind::kProgression: {
      for (UniverseIndex e : lang.extras()) {
        if (!InSupport(e)) return false;
      }
      // Beyond the anchor and the first family member, membership of the
      // progression member offset + step*j in the support is determined by
      // its residue mod the family step, which is constant in j exactly
      // when the family step divides the progression step.
      if (lang.step() % family_step_ != 0) return false;
      u128 settle = u128(family_base_) + family_step_;
      if (u128(anchor_) > settle) settle = anchor_;
      std::uint64_t j = 1;
      for (;; ++j) {
        u128 m = u128(lang.offset()) + u128(lang.step()) * j;
        if (m > std::numeric_limits<std::uint64_t>::max()) return false;
        if (!InSupport(static_cast<UniverseIndex>(m))) return false;
        if (m > settle) break;  // residue now decides all later members
      }
      return true;
    }
    case Language::Kind::kPredicate: {
      for (UniverseIndex k = 1; k <= lang.enumeration_cap(); ++k) {
        if (lang.Contains(k) && !InSupport(k)) return false;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Dataset::Dataset(std::vector<UniverseIndex> entries)
    : entries_(std::move(entries)) {
  multiplicity_.reserve(entries_.size());
  for (UniverseIndex k : entries_) ++multiplicity_[k];
}

std::uint64_t Dataset::Multiplicity(UniverseIndex k) const {
  auto it = multiplicity_.find(k);
  return it == multiplicity_.end() ? 0 : it->second;
}

Dataset DrawDataset(const Distribution& dist, std::uint64_t n,
                    RandomStream& rng) {
  if (n == 0) throw InstanceError("sample size must be >= 1");
  std::vector<UniverseIndex> entries;
  entries.reserve(n);
  for (std::uint64_t t = 0; t < n; ++t) entries.push_back(dist.Sample(rng));
  return Dataset(std::move(entries));
}

double PopulationErr(const Distribution& dist, const Language& lang,
                     bool* truncated) {
  if (truncated != nullptr) *truncated = false;
  if (dist.kind() == Distribution::Kind::kFiniteAtoms) {
    double err = 0.0;
    for (const AtomMass& a : dist.atoms()) {
      if (!lang.Contains(a.index)) err += a.mass;
    }
    return err;
  }

  double err = lang.Contains(dist.anchor()) ? 0.0 : 0.75;

  // Family part: sum 2^-k/4 over members outside the language. Terms are
  // dyadic, so the explicit prefix sum is exact; the tail is either folded
  // in exactly (eventually constant membership) or truncated and flagged.
  auto outside = [&](std::uint64_t k) -> std::optional<bool> {
    u128 m = u128(dist.family_base()) + u128(dist.family_step()) * k;
    if (m > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return !lang.Contains(static_cast<UniverseIndex>(m));
  };

  // Position after which the pattern can only depend on residues: family
  // members exceed every extra / finite index and the progression offset.
  std::uint64_t settle_value = 0;
  std::uint64_t period = 1;
  bool tail_decidable = true;
  switch (lang.kind()) {
    case Language::Kind::kProgression: {
      settle_value = lang.offset();
      for (UniverseIndex e : lang.extras()) settle_value = std::max(settle_value, e);
      std::uint64_t g = std::gcd(lang.step(), dist.family_step());
      period = lang.step() / g;
      break;
    }
    case Language::Kind::kFiniteSet: {
      for (UniverseIndex e : lang.indices()) settle_value = std::max(settle_value, e);
      period = 1;  // eventually constant: all members outside
      break;
    }
    case Language::Kind::kPredicate:
      tail_decidable = false;
      break;
  }

  std::uint64_t k_settle = 0;
  if (tail_decidable) {
    // Smallest k with family member > settle_value.
    if (settle_value <= dist.family_base()) {
      k_settle = 0;
    } else {
      k_settle = (settle_value - dist.family_base()) / dist.family_step();
    }
  }

  // Try the exact route: explicit sum to K, then a constant tail.
  if (tail_decidable && k_settle + 2 * period <= 1024) {
    std::uint64_t k_explicit = k_settle + period;
    double family_err = 0.0;
    bool representable = true;
    for (std::uint64_t k = 1; k <= k_explicit; ++k) {
      std::optional<bool> out = outside(k);
      if (!out.has_value()) {
        representable = false;
        break;
      }
      if (*out) family_err += FamilyMass(k);
    }
    if (representable) {
      // Tail constancy: one full period past the settle point.
      std::optional<bool> first = outside(k_explicit + 1);
      bool constant = first.has_value();
      if (constant) {
        for (std::uint64_t k = k_explicit + 2; k <= k_explicit + period; ++k) {
          std::optional<bool> out = outside(k);
          if (!out.has_value() || *out != *first) {
            constant = false;
            break;
          }
        }
      }
      if (constant) {
        if (*first) {
          // sum_{k > K} 2^-k / 4 = 2^-K / 4
          family_err += std::ldexp(1.0, -static_cast<int>(
                                            std::min<std::uint64_t>(k_explicit,
                                                                    1074)) -
                                            2);
        }
        return err + family_err;
      }
    }
  }

  // Truncated route: tail mass below 1e-12, flagged.
  double family_err = 0.0;
  for (std::uint64_t k = 1; k <= kTruncationDepth; ++k) {
    std::optional<bool> out = outside(k);
    if (!out.has_value()) break;
    if (*out) family_err += FamilyMass(k);
  }
  if (truncated != nullptr) *truncated = true;
  return err + family_err;
}

double EmpiricalErr(const Dataset& data, const Language& lang) {
  if (data.size() == 0) return 0.0;
  std::uint64_t outside = 0;
  for (const auto& [index, count] : data.multiplicities()) {
    if (!lang.Contains(index)) outside += count;
  }
  return static_cast<double>(outside) / static_cast<double>(data.size());
}

}  // namespace dplang
