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
//
// Independent reference computations for tests. Deliberately primitive:
// long double arithmetic, direct summation, dense grids. Shares no code
// with the library paths it checks.

#ifndef SURVEYDP_TESTS_ORACLES_HPP_
#define SURVEYDP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "surveydp/mechanisms.hpp"

namespace oracle {

struct Mixture {
  long double scale;
  std::vector<std::pair<long double, long double>> comps;  // (center, weight)
};

inline Mixture from(const surveydp::LaplaceMixture& mix) {
  Mixture out;
  out.scale = mix.scale();
  for (const auto& c : mix.components()) {
    out.comps.push_back({c.center, c.weight});
  }
  return out;
}

inline long double density(const Mixture& mix, long double a) {
  long double sum = 0.0L;
  for (const auto& [center, weight] : mix.comps) {
    sum += weight * std::exp(-std::abs(a - center) / mix.scale);
  }
  return sum / (2.0L * mix.scale);
}

// sup over the real line of ln(density_a / density_b): a dense uniform grid
// over [min center - 40 s, max center + 40 s], augmented with every
// component center of both mixtures, plus the two analytic tail limits
// (the ratio is constant beyond the extreme centers).
inline double sup_log_ratio_grid(const Mixture& a, const Mixture& b,
                                 std::size_t grid_points) {
  std::vector<long double> centers;
  for (const auto& [center, weight] : a.comps) centers.push_back(center);
  for (const auto& [center, weight] : b.comps) centers.push_back(center);
  const long double lo =
      *std::min_element(centers.begin(), centers.end()) - 40.0L * a.scale;
  const long double hi =
      *std::max_element(centers.begin(), centers.end()) + 40.0L * a.scale;

  long double best = -1e400L;
  const auto consider = [&](long double x) {
    const long double r = std::log(density(a, x)) - std::log(density(b, x));
    if (r > best) best = r;
  };
  for (std::size_t i = 0; i < grid_points; ++i) {
    consider(lo + (hi - lo) * static_cast<long double>(i) /
                      static_cast<long double>(grid_points - 1));
  }
  for (long double c : centers) consider(c);

  long double up_a = 0.0L;
  long double up_b = 0.0L;
  long double down_a = 0.0L;
  long double down_b = 0.0L;
  for (const auto& [center, weight] : a.comps) {
    up_a += weight * std::exp(center / a.scale);
    down_a += weight * std::exp(-center / a.scale);
  }
  for (const auto& [center, weight] : b.comps) {
    up_b += weight * std::exp(center / b.scale);
    down_b += weight * std::exp(-center / b.scale);
  }
  best = std::max(best, std::log(up_a) - std::log(up_b));
  best = std::max(best, std::log(down_a) - std::log(down_b));
  return static_cast<double>(best);
}

// Composite Simpson integral of the mixture density over [lo, hi];
// intervals must be even.
inline double integral_simpson(const Mixture& mix, long double lo,
                               long double hi, int intervals) {
  const long double h = (hi - lo) / intervals;
  long double sum = density(mix, lo) + density(mix, hi);
  for (int i = 1; i < intervals; ++i) {
    sum += density(mix, lo + h * i) * (i % 2 == 1 ? 4.0L : 2.0L);
  }
  return static_cast<double>(sum * h / 3.0L);
}

}  // namespace oracle

#endif  // SURVEYDP_TESTS_ORACLES_HPP_
