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

#ifndef SURVEYDP_BOUNDS_HPP_
#define SURVEYDP_BOUNDS_HPP_

#include <cstdint>
#include <vector>

namespace surveydp {

// Per-stratum privacy levels: adding or removing a record in stratum s is
// protected at per_stratum[s-1].
using StratifiedEpsilon = std::vector<double>;

// Effective epsilon of an eps-DP mechanism run on an independent
// rate-r subsample: ln(1 + r(e^eps - 1)). Monotone in both arguments.
double poisson_amplified_eps(double eps, double r);

// Componentwise amplification across strata with per-stratum rates.
StratifiedEpsilon stratified_poisson_eps(double eps,
                                         const std::vector<double>& rates);

// Cost of changing one record's stratum from s to s2 (remove + add):
// eps_s + eps_s2. Strata are 1-based.
double value_change_eps(const StratifiedEpsilon& se, int s, int s2);

// Worst-case epsilon of a mechanism whose sample size can shift by gs under
// one added record: gs * eps.
double degradation_eps(double eps, std::int64_t gs);

// Choose-1-of-2 cluster design where the clusters' noiseless outputs sit b
// apart: ln((1 + e^(-eps b)) / (e^(-eps) + e^(-eps b))). Increasing in b,
// approaching eps.
double cluster_worst_eps(double eps, std::int64_t b);

// Same design with identically distributed clusters: ln((1 + e^eps) / 2).
double homogeneous_cluster_eps(double eps);

// High-probability epsilon for clusters of n Bernoulli(1/2) values, using
// the typical between-cluster gap sqrt(n)/4:
// ln((e^eps + e^(-eps sqrt(n)/4)) / (1 + e^(-eps sqrt(n)/4))).
double random_dp_cluster_eps(double eps, std::int64_t n);

// First-order approximation r * eps of poisson_amplified_eps; accurate for
// small eps only.
double small_eps_approx(double eps, double r);

}  // namespace surveydp

#endif  // SURVEYDP_BOUNDS_HPP_
