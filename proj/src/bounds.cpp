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

#include "surveydp/bounds.hpp"

#include <cmath>

#include "surveydp/errors.hpp"

namespace surveydp {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error("eps must be positive and finite");
  }
}

void check_rate(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error("sampling rate must lie in [0, 1]");
  }
}

}  // namespace

double poisson_amplified_eps(double eps, double r) {
  check_eps(eps);
  check_rate(r);
  return std::log1p(r * std::expm1(eps));
}

StratifiedEpsilon stratified_poisson_eps(double eps,
                                         const std::vector<double>& rates) {
  check_eps(eps);
  StratifiedEpsilon out;
  out.reserve(rates.size());
  for (double r : rates) {
    out.push_back(poisson_amplified_eps(eps, r));
  }
  return out;
}

double value_change_eps(const StratifiedEpsilon& se, int s, int s2) {
  if (s < 1 || static_cast<std::size_t>(s) > se.size() || s2 < 1 ||
      static_cast<std::size_t>(s2) > se.size()) {
    throw Error("stratum index outside [1, k]");
  }
  return se[static_cast<std::size_t>(s - 1)] +
         se[static_cast<std::size_t>(s2 - 1)];
}

double degradation_eps(double eps, std::int64_t gs) {
  check_eps(eps);
  if (gs < 0) throw Error("global sensitivity must be non-negative");
  return static_cast<double>(gs) * eps;
}

double cluster_worst_eps(double eps, std::int64_t b) {
  check_eps(eps);
  if (b < 1) throw Error("cluster gap b must be a positive integer");
  // t = e^(-eps b) underflows to 0 for large eps*b, which lands exactly on
  // the b -> infinity limit eps.
  const double t = std::exp(-eps * static_cast<double>(b));
  return std::log1p(t) - std::log(std::exp(-eps) + t);
}

double homogeneous_cluster_eps(double eps) {
  check_eps(eps);
  // ln((1+e^eps)/2) = eps + ln(1+e^-eps) - ln 2, stable for large eps.
  return eps + std::log1p(std::exp(-eps)) - std::log(2.0);
}

double random_dp_cluster_eps(double eps, std::int64_t n) {
  check_eps(eps);
  if (n < 0) throw Error("cluster size n must be non-negative");
  const double gap = eps * std::sqrt(static_cast<double>(n)) / 4.0;
  // ln((e^eps + e^-gap)/(1 + e^-gap)) = eps + ln(1+e^(-gap-eps)) - ln(1+e^-gap)
  return eps + std::log1p(std::exp(-gap - eps)) - std::log1p(std::exp(-gap));
}

double small_eps_approx(double eps, double r) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error("eps must be non-negative and finite");
  }
  check_rate(r);
  return r * eps;
}

}  // namespace surveydp
