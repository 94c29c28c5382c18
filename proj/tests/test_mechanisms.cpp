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

#include "dplang/mechanisms.hpp"

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"

using namespace dplang;

namespace {

ScoreVector Scores(std::vector<double> q, double sensitivity) {
  return {std::move(q), sensitivity, SensitivityKind::kPerCoordinate};
}

}  // namespace

TEST_CASE("selection probabilities") {
  SUBCASE("equal scores are uniform") {
    auto p = ExpMechProbs(Scores({0, 0, 0}, 1.0), 2.7);
    for (double v : p) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }

  SUBCASE("log-spaced scores hit exact weights") {
    const double eps = 0.8;
    auto p = ExpMechProbs(Scores({0, (2.0 / eps) * std::log(3.0)}, 1.0), eps);
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-12));
  }

  SUBCASE("identification-style scores") {
    // n = 4, f = 3 worked example: scores (1, -6.25), sensitivity 4.5.
    auto p = ExpMechProbs(Scores({1.0, -6.25}, 4.5), 1.0);
    const long double w1 = expl(1.0L / 9.0L);
    const long double w2 = expl(-6.25L / 9.0L);
    CHECK(p[0] == doctest::Approx(double(w1 / (w1 + w2))).epsilon(1e-14));
    CHECK(p[0] == doctest::Approx(0.6911).epsilon(1e-4));
    CHECK(p[1] == doctest::Approx(0.3089).epsilon(1e-3));
  }

  SUBCASE("probabilities sum to one") {
    auto p = ExpMechProbs(Scores({-4000, -4102.5, 3, 7.25}, 2.0), 0.3);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("empty candidate set throws") {
    CHECK_THROWS_AS(ExpMechProbs(Scores({}, 1.0), 1.0), EmptyCandidates);
  }
}

TEST_CASE("selection probability invariances") {
  RandomStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> q(4);
    for (double& v : q) v = 20.0 * rng.NextUniform() - 10.0;
    const double eps = 0.1 + 3.0 * rng.NextUniform();
    auto p = ExpMechProbs(Scores(q, 1.5), eps);

    // Shift invariance.
    std::vector<double> shifted = q;
    for (double& v : shifted) v += 123.456;
    auto ps = ExpMechProbs(Scores(shifted, 1.5), eps);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(std::abs(p[i] - ps[i]) < 1e-12);
    }

    // Scale invariance of (scores, sensitivity) pairs.
    std::vector<double> scaled = q;
    for (double& v : scaled) v *= 7.5;
    auto pc = ExpMechProbs(Scores(scaled, 1.5 * 7.5), eps);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(std::abs(p[i] - pc[i]) < 1e-12);
    }

    // Monotonicity.
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[i] > q[j]) CHECK(p[i] > p[j]);
      }
    }
  }
}

TEST_CASE("privacy ratio of the exact probabilities") {
  // Coordinate-wise score changes of at most the sensitivity keep every
  // outcome's log-probability within epsilon.
  RandomStream rng(12);
  const double sensitivity = 0.9;
  for (double eps : {0.1, 0.5, 1.0, 2.0}) {
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> q(5), qp(5);
      for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = 10.0 * rng.NextUniform() - 5.0;
        qp[i] = q[i] + sensitivity * (2.0 * rng.NextUniform() - 1.0);
      }
      auto p = ExpMechProbs(Scores(q, sensitivity), eps);
      auto pp = ExpMechProbs(Scores(qp, sensitivity), eps);
      for (std::size_t i = 0; i < p.size(); ++i) {
        worst = std::max(worst, std::abs(std::log(p[i]) - std::log(pp[i])));
      }
    }
    CHECK(worst <= eps + 1e-9);
  }
}

TEST_CASE("sampling consumes exactly one uniform") {
  ScoreVector sv = Scores({0.5, 0.1, -2.0}, 1.0);
  RandomStream a(77), b(77);
  (void)ExpMechSample(sv, 1.0, a);
  (void)b.NextUniform();
  // Both streams must now be in the same state.
  for (int i = 0; i < 4; ++i) CHECK(a.NextU64() == b.NextU64());
}

TEST_CASE("sampling follows the probability vector") {
  ScoreVector sv = Scores({0.0, (2.0 / 1.0) * std::log(3.0)}, 1.0);
  RandomStream rng(123);
  std::uint64_t second = 0;
  const int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    second += ExpMechSample(sv, 1.0, rng) == 1 ? 1 : 0;
  }
  CHECK(static_cast<double>(second) / kDraws ==
        doctest::Approx(0.75).epsilon(0.01));
}

TEST_CASE("gaussian calibration") {
  SUBCASE("matches the closed form") {
    auto cal = GaussianSigma(1.0, 1.0, 0.05);
    CHECK(cal.sigma ==
          doctest::Approx(double(testing::GaussianSigmaOracle(1.0L, 1.0L,
                                                              0.05L)))
              .epsilon(1e-14));
    CHECK(cal.sigma == doctest::Approx(2.5373).epsilon(1e-4));
    CHECK(cal.regime_warning);  // classical regime is epsilon < 1
  }

  SUBCASE("linear in the sensitivity, inverse in epsilon") {
    const double base = GaussianSigma(1.0, 1.0, 0.05).sigma;
    CHECK(GaussianSigma(2.0, 1.0, 0.05).sigma ==
          doctest::Approx(2.0 * base).epsilon(1e-15));
    auto half_eps = GaussianSigma(1.0, 0.5, 0.05);
    CHECK(half_eps.sigma == doctest::Approx(2.0 * base).epsilon(1e-15));
    CHECK_FALSE(half_eps.regime_warning);
  }

  SUBCASE("delta near one stays finite") {
    const double sigma = GaussianSigma(1.0, 1.0, 0.999999).sigma;
    CHECK(sigma > 0.0);
    CHECK(sigma < std::sqrt(2.0 * std::log(1.25 / 0.999999)) + 1e-9);
  }

  SUBCASE("invalid delta") {
    CHECK_THROWS_AS(GaussianSigma(1.0, 1.0, 0.0), InvalidDelta);
    CHECK_THROWS_AS(GaussianSigma(1.0, 1.0, 1.0), InvalidDelta);
    CHECK_THROWS_AS(GaussianSigma(1.0, 1.0, -0.3), InvalidDelta);
  }
}

TEST_CASE("gaussian noise moments") {
  const double sigma = 0.7;
  const std::uint64_t kDraws = 1000000;
  RandomStream rng(2024);
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    const double z = rng.NextGaussian(sigma);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kDraws;
  const double stddev = std::sqrt(sum_sq / kDraws - mean * mean);
  CHECK(std::abs(mean) < 0.005 * sigma);
  CHECK(stddev == doctest::Approx(sigma).epsilon(0.005));
}

TEST_CASE("noise vector perturbation draws in index order") {
  std::vector<double> values{1.0, 2.0, 3.0};
  RandomStream a(9), b(9);
  AddGaussianNoise(values, 0.5, a);
  CHECK(values[0] == doctest::Approx(1.0 + b.NextGaussian(0.5)));
  CHECK(values[1] == doctest::Approx(2.0 + b.NextGaussian(0.5)));
  CHECK(values[2] == doctest::Approx(3.0 + b.NextGaussian(0.5)));
}
