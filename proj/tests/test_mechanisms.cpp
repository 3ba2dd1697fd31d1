// Copyright 2026 The SurveyDP Authors
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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "surveydp/errors.hpp"
#include "surveydp/mechanisms.hpp"
#include "surveydp/population.hpp"
#include "surveydp/rng.hpp"
#include "surveydp/samplers.hpp"

using namespace surveydp;

namespace {

Population three_records() {
  return Population(
      {Record{1, 1, -5.0}, Record{1, 1, 0.5}, Record{1, 1, 3.0}}, 1, 1);
}

}  // namespace

TEST_CASE("query_value: count is the multiset size") {
  CHECK(query_value(Query::count(), Population{}) == 0.0);
  CHECK(query_value(Query::count(), three_records()) == 3.0);
}

TEST_CASE("query_value: clamped_sum clips each record then sums") {
  // {-5, 0.5, 3} clamped to [-2, 1] is {-2, 0.5, 1}.
  CHECK(query_value(Query::clamped_sum(-2.0, 1.0), three_records()) ==
        doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(query_value(Query::clamped_sum(0.0, 1.0), three_records()) ==
        doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("query_sensitivity: worst single-record change") {
  CHECK(query_sensitivity(Query::count()) == 1.0);
  CHECK(query_sensitivity(Query::clamped_sum(0.0, 1.0)) == 1.0);
  // A record clamped to -2 moves the sum by 2, more than the hi end.
  CHECK(query_sensitivity(Query::clamped_sum(-2.0, 1.0)) == 2.0);
  CHECK(query_sensitivity(Query::clamped_sum(-0.25, 3.0)) == 3.0);
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(Query::clamped_sum(1.0, 1.0), Error);
  CHECK_THROWS_AS(Query::clamped_sum(2.0, -1.0), Error);
}

TEST_CASE("mechanism scale is sensitivity over epsilon") {
  CHECK(MechanismSpec::laplace(Query::count(), 2.0).scale() == 0.5);
  CHECK(MechanismSpec::laplace(Query::clamped_sum(-2.0, 1.0), 1.0).scale() ==
        2.0);
  CHECK_THROWS_AS(MechanismSpec::laplace(Query::count(), 0.0), Error);
  CHECK_THROWS_AS(MechanismSpec::laplace(Query::count(), -1.0), Error);
}

TEST_CASE("laplace density: unit-scale point values") {
  const auto mix = LaplaceMixture::from_components(1.0, {{0.0, 1.0}});
  CHECK(mix.density(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // exp(-1)/2.
  CHECK(mix.density(1.0) ==
        doctest::Approx(0.18393972058572116).epsilon(1e-15));
  CHECK(mix.log_density(1.0) ==
        doctest::Approx(std::log(0.5) - 1.0).epsilon(1e-15));
}

TEST_CASE("laplace density: symmetric about the center, scale shifts") {
  const auto mix = LaplaceMixture::from_components(0.7, {{2.5, 1.0}});
  for (const double x : {0.1, 0.9, 3.3, 17.0}) {
    CHECK(mix.density(2.5 + x) ==
          doctest::Approx(mix.density(2.5 - x)).epsilon(1e-14));
  }
  // Lap(c, s) density at c+x equals Lap(0, s) density at x.
  const auto origin = LaplaceMixture::from_components(0.7, {{0.0, 1.0}});
  CHECK(mix.density(3.2) == doctest::Approx(origin.density(0.7)).epsilon(1e-14));
}

TEST_CASE("mixture construction: near-coincident centers merge") {
  const auto mix = LaplaceMixture::from_components(
      1.0, {{0.0, 0.5}, {1e-13, 0.25}, {1.0, 0.25}});
  REQUIRE(mix.components().size() == 2);
  CHECK(mix.components()[0].weight == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(mix.components()[1].center == 1.0);
  CHECK(mix.components()[1].weight == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("mixture construction: negligible weights drop, rest renormalize") {
  const auto mix = LaplaceMixture::from_components(
      1.0, {{0.0, 0.5}, {5.0, 1e-16}, {1.0, 0.5}});
  REQUIRE(mix.components().size() == 2);
  const double total =
      mix.components()[0].weight + mix.components()[1].weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mixture construction: invalid inputs throw") {
  CHECK_THROWS_AS(LaplaceMixture::from_components(0.0, {{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(LaplaceMixture::from_components(1.0, {{0.0, -0.5}}), Error);
  CHECK_THROWS_AS(LaplaceMixture::from_components(1.0, {}), Error);
  // Everything below the drop threshold: nothing survives.
  CHECK_THROWS_AS(LaplaceMixture::from_components(1.0, {{0.0, 1e-16}}), Error);
}

TEST_CASE("mixture density integrates to one") {
  const auto mix = LaplaceMixture::from_components(
      0.5, {{0.0, 0.25}, {1.0, 0.5}, {3.0, 0.25}});
  const double integral =
      oracle::integral_simpson(oracle::from(mix), -30.0L, 33.0L, 200000);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mixture density equals the direct component sum") {
  const auto mix = LaplaceMixture::from_components(
      2.0, {{-1.0, 0.125}, {0.0, 0.5}, {0.5, 0.375}});
  const oracle::Mixture ref = oracle::from(mix);
  for (const double a : {-7.0, -1.0, -0.3, 0.0, 0.5, 2.0, 11.0}) {
    const double expect = static_cast<double>(oracle::density(ref, a));
    CHECK(mix.density(a) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(mixture_density(mix, a) == mix.density(a));
    CHECK(mix.log_density(a) ==
          doctest::Approx(std::log(expect)).epsilon(1e-12));
  }
}

TEST_CASE("log_density stays finite far into the tails") {
  const auto mix =
      LaplaceMixture::from_components(1.0, {{0.0, 0.5}, {4.0, 0.5}});
  // density underflows to 0 near a = 800, log_density must not.
  const double ld = mix.log_density(800.0);
  CHECK(std::isfinite(ld));
  // Right tail: log(w/2s) - (a-4)/s plus the component at 0's remainder.
  CHECK(ld == doctest::Approx(std::log(0.25) - 796.0 +
                              std::log1p(std::exp(-4.0)))
                  .epsilon(1e-12));
}

TEST_CASE("mixture_from_outcomes: poisson half on one record") {
  const Population p({Record{1, 1, 1.0}}, 1, 1);
  const auto outcomes = enumerate_outcomes(SamplingDesign::poisson({0.5}), p);
  const auto m = MechanismSpec::laplace(Query::count(), 1.0);
  const auto mix = mixture_from_outcomes(outcomes, m.query, m);
  REQUIRE(mix.components().size() == 2);
  CHECK(mix.components()[0].center == 0.0);
  CHECK(mix.components()[0].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mix.components()[1].center == 1.0);
  CHECK(mix.components()[1].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mix.scale() == 1.0);
}

TEST_CASE("mixture_from_outcomes: equal query values pool their mass") {
  // Two records with the same value: subsets of size 1 are distinct outcomes
  // but share the count 1, so the mixture has 3 components, not 4.
  const Population p({Record{1, 1, 2.0}, Record{1, 1, 2.0}}, 1, 1);
  const auto outcomes = enumerate_outcomes(SamplingDesign::poisson({0.5}), p);
  REQUIRE(outcomes.entries.size() == 4);
  const auto m = MechanismSpec::laplace(Query::count(), 1.0);
  const auto mix = mixture_from_outcomes(outcomes, m.query, m);
  REQUIRE(mix.components().size() == 3);
  CHECK(mix.components()[1].center == 1.0);
  CHECK(mix.components()[1].weight == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sample_output: deterministic given the seed") {
  const auto m = MechanismSpec::laplace(Query::count(), 1.0);
  const Population p = three_records();
  SeededStream a(42), b(42), c(43);
  const double va = sample_output(m, p, a);
  CHECK(va == sample_output(m, p, b));
  CHECK(va != sample_output(m, p, c));
}

TEST_CASE("sample_output: centered on the query value") {
  const auto m = MechanismSpec::laplace(Query::count(), 1.0);
  const Population p = three_records();
  SeededStream rng(7);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += sample_output(m, p, rng);
  // Lap(3, 1): sd of the mean is sqrt(2/n) ~ 0.01.
  CHECK(sum / n == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("sample_output: doubling epsilon quarters the noise variance") {
  const Population p({Record{1, 1, 0.0}}, 1, 1);
  const auto m1 = MechanismSpec::laplace(Query::count(), 1.0);
  const auto m2 = MechanismSpec::laplace(Query::count(), 2.0);
  const int n = 40000;
  auto variance = [&](const MechanismSpec& m, std::uint64_t seed) {
    SeededStream rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_output(m, p, rng) - 1.0;
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n;
    return sumsq / n - mean * mean;
  };
  const double v1 = variance(m1, 99);
  const double v2 = variance(m2, 99);
  CHECK(v1 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(v1 / v2 == doctest::Approx(4.0).epsilon(0.1));
}
