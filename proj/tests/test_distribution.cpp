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

#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "dplang/stats.hpp"
#include "oracles.hpp"

using namespace dplang;

namespace {

Language LangL() { return Language::Progression(0, 3, {1}, "L"); }
Language LangLPrime() { return Language::Progression(1, 3, {1}, "L'"); }

Distribution IppD() {
  return Distribution::FiniteAtoms({{1, 0.75}, {3, 0.25}});
}

Distribution IidpD() { return Distribution::StructuredGeometric(1, 0, 3); }

}  // namespace

TEST_CASE("point mass draws are constant") {
  Distribution d = Distribution::FiniteAtoms({{5, 1.0}});
  RandomStream rng(1);
  Dataset s = DrawDataset(d, 3, rng);
  CHECK(s.entries() == std::vector<UniverseIndex>{5, 5, 5});
  CHECK(s.Multiplicity(5) == 3);
}

TEST_CASE("draw frequencies match the masses") {
  const std::uint64_t kDraws = 1000000;

  SUBCASE("finite atoms") {
    Distribution d = IppD();
    RandomStream rng(42);
    std::uint64_t heavy = 0;
    for (std::uint64_t i = 0; i < kDraws; ++i) {
      heavy += d.Sample(rng) == 1 ? 1 : 0;
    }
    const double freq = static_cast<double>(heavy) / kDraws;
    CHECK(freq == doctest::Approx(0.75).epsilon(0.002 / 0.75));
  }

  SUBCASE("geometric family level 2") {
    Distribution d = IidpD();
    RandomStream rng(43);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < kDraws; ++i) {
      hits += d.Sample(rng) == 6 ? 1 : 0;  // family member k = 2
    }
    const double freq = static_cast<double>(hits) / kDraws;
    CHECK(std::abs(freq - 0.0625) < 0.001);
  }
}

TEST_CASE("draws are reproducible bit for bit") {
  Distribution d = IidpD();
  RandomStream a(7), b(7);
  Dataset s1 = DrawDataset(d, 500, a);
  Dataset s2 = DrawDataset(d, 500, b);
  CHECK(s1.entries() == s2.entries());
}

TEST_CASE("support and mass queries are exact") {
  Distribution d = IidpD();
  CHECK(d.InSupport(1));
  CHECK(d.InSupport(3));
  CHECK(d.InSupport(3000000000000ULL));
  CHECK_FALSE(d.InSupport(2));
  CHECK_FALSE(d.InSupport(4));
  CHECK(d.Mass(1) == 0.75);
  CHECK(d.Mass(3) == 0.125);
  CHECK(d.Mass(6) == 0.0625);
  CHECK(d.Mass(4) == 0.0);

  Distribution dprime = Distribution::StructuredGeometric(1, 1, 3);
  CHECK(dprime.InSupport(4));
  CHECK_FALSE(dprime.InSupport(3));
}

TEST_CASE("population risk closed forms") {
  SUBCASE("finite atoms") {
    Distribution d = IppD();
    bool truncated = true;
    CHECK(PopulationErr(d, LangL(), &truncated) == 0.0);
    CHECK_FALSE(truncated);
    CHECK(PopulationErr(d, LangLPrime()) == 0.25);
    Language whole = Language::Progression(0, 1);
    CHECK(PopulationErr(d, whole) == 0.0);
  }

  SUBCASE("geometric with eventually constant pattern") {
    Distribution d = IidpD();
    bool truncated = true;
    CHECK(PopulationErr(d, LangL(), &truncated) == 0.0);
    CHECK_FALSE(truncated);
    CHECK(PopulationErr(d, LangLPrime(), &truncated) == 0.25);
    CHECK_FALSE(truncated);
  }

  SUBCASE("geometric against a finite language") {
    Distribution d = IidpD();
    bool truncated = true;
    // Keeps the anchor and the first family member only: loses the mass of
    // members k >= 2, which is 0.25 - 0.125 = 0.125.
    double err = PopulationErr(d, Language::FiniteSet({1, 3}), &truncated);
    CHECK_FALSE(truncated);
    CHECK(err == 0.125);
  }

  SUBCASE("predicate languages fall back to flagged truncation") {
    Distribution d = IidpD();
    bool truncated = false;
    double err = PopulationErr(
        d, Language::Predicate([](UniverseIndex k) { return k == 1; }),
        &truncated);
    CHECK(truncated);
    CHECK(err == doctest::Approx(0.25).epsilon(1e-9));
  }

  SUBCASE("mixed periodic pattern truncates within tolerance") {
    Distribution d = IidpD();  // members 3k
    // Progression {6k : k >= 1} hits every second family member, so the
    // tail never becomes constant.
    Language evens = Language::Progression(0, 6);
    bool truncated = false;
    double err = PopulationErr(d, evens, &truncated);
    CHECK(truncated);
    // anchor outside: 3/4; odd family levels outside: 0.25 * sum_{k odd}
    // 2^-k = 1/6.
    const double expected = 0.75 + 1.0 / 6.0;
    CHECK(err == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mass conservation for finite atoms") {
  Distribution d = Distribution::FiniteAtoms(
      {{2, 0.125}, {5, 0.5}, {9, 0.25}, {12, 0.125}});
  for (const Language& lang :
       {Language::FiniteSet({2, 5}), Language::Progression(0, 5),
        Language::FiniteSet({9}), LangL()}) {
    double inside = 0.0;
    for (const AtomMass& a : d.atoms()) {
      if (lang.Contains(a.index)) inside += a.mass;
    }
    CHECK(PopulationErr(d, lang) + inside == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("empirical risk") {
  // s0 = 1, s1 = 3 on the built-in pair.
  Dataset s({1, 1, 1, 3});
  CHECK(EmpiricalErr(s, LangL()) == 0.0);
  CHECK(EmpiricalErr(s, LangLPrime()) == 0.25);
  Dataset outside({2, 2});
  CHECK(EmpiricalErr(outside, LangL()) == 1.0);
}

TEST_CASE("empirical risk converges to population risk") {
  const std::uint64_t n = 100000;
  const double tolerance = 5.0 * std::sqrt(0.25 / static_cast<double>(n));
  RandomStream seeder(99);
  int within = 0;
  const int kPairs = 30;
  for (int trial = 0; trial < kPairs; ++trial) {
    // Random four-atom distribution with dyadic masses.
    std::uint64_t base = 1 + seeder.NextBelow(50);
    Distribution d = Distribution::FiniteAtoms({{base, 0.5},
                                                {base + 1, 0.25},
                                                {base + 2, 0.125},
                                                {base + 3, 0.125}});
    Language lang = Language::Progression(seeder.NextBelow(3),
                                          1 + seeder.NextBelow(4));
    RandomStream rng(MixSeed(1234, 0, trial));
    Dataset s = DrawDataset(d, n, rng);
    double gap = std::abs(EmpiricalErr(s, lang) - PopulationErr(d, lang));
    within += gap <= tolerance ? 1 : 0;
  }
  CHECK(within >= kPairs - 1);
}

TEST_CASE("multiplicity bookkeeping") {
  Dataset s({3, 3, 6});
  CHECK(s.Multiplicity(3) == 2);
  CHECK(s.Multiplicity(9) == 0);
  CHECK(s.multiplicities().size() <= s.size());

  RandomStream rng(5);
  Dataset random = DrawDataset(IidpD(), 300, rng);
  for (UniverseIndex k : {1ull, 3ull, 6ull, 9ull, 2ull}) {
    CHECK(random.Multiplicity(k) ==
          testing::BruteMultiplicity(random.entries(), k));
  }
}

TEST_CASE("language containment queries") {
  Distribution geo = IidpD();
  CHECK(*geo.ContainsLanguage(LangL()));
  CHECK_FALSE(*geo.ContainsLanguage(LangLPrime()));
  CHECK(*geo.ContainsLanguage(Language::FiniteSet({1, 3, 9})));
  CHECK_FALSE(*geo.ContainsLanguage(Language::FiniteSet({1, 4})));
  // Step not divisible by the family step: some member always escapes.
  CHECK_FALSE(*geo.ContainsLanguage(Language::Progression(0, 4)));
  // Divisible step but wrong residue.
  CHECK_FALSE(*geo.ContainsLanguage(Language::Progression(1, 3)));
  CHECK(*geo.ContainsLanguage(Language::Progression(0, 6)));

  Distribution finite = IppD();
  CHECK_FALSE(*finite.ContainsLanguage(LangL()));  // infinite language
  CHECK(*finite.ContainsLanguage(Language::FiniteSet({1, 3})));

  // Predicate containment is undecidable past the cap.
  Language pred = Language::Predicate(
      [](UniverseIndex k) { return k == 1 || k % 3 == 0; }, 100);
  CHECK_FALSE(geo.ContainsLanguage(pred).has_value());
}

TEST_CASE("atom list validation") {
  CHECK_THROWS_AS(Distribution::FiniteAtoms({{1, 0.5}, {2, 0.6}}),
                  InstanceError);
  CHECK_THROWS_AS(Distribution::FiniteAtoms({{1, 0.5}, {1, 0.5}}),
                  InstanceError);
  CHECK_THROWS_AS(Distribution::StructuredGeometric(3, 0, 3), InstanceError);
}

TEST_CASE("geometric masses sum to one exactly") {
  Distribution d = IidpD();
  // Dyadic terms: the prefix sum is exact, and the tail past K is 2^-K/4.
  double total = d.Mass(d.anchor());
  for (std::uint64_t k = 1; k <= 50; ++k) {
    total += d.Mass(d.FamilyIndex(k));
  }
  CHECK(total == 1.0 - std::ldexp(1.0, -52));
}
