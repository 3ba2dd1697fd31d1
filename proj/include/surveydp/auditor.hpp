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

#ifndef SURVEYDP_AUDITOR_HPP_
#define SURVEYDP_AUDITOR_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "surveydp/bounds.hpp"
#include "surveydp/mechanisms.hpp"
#include "surveydp/population.hpp"
#include "surveydp/rng.hpp"
#include "surveydp/samplers.hpp"

namespace surveydp {

enum class AuditMethod { kExact, kMonteCarlo, kClosedForm };

// What one privacy audit measured. eps_add bounds the density gain from
// adding the record, eps_remove from removing it; the effective epsilon is
// their max. witness_output is an output value attaining the supremum
// (+-infinity when only the tail attains it).
struct PrivacyReport {
  double eps_add = 0.0;
  double eps_remove = 0.0;
  double eps_effective = 0.0;
  double witness_output = 0.0;
  AuditMethod method = AuditMethod::kExact;
  std::optional<StratifiedEpsilon> per_stratum;
  // A swor allocation was clamped to a stratum size somewhere in the audit.
  bool truncated_allocation = false;
};

struct SupLogRatio {
  double eps = 0.0;
  double witness = 0.0;  // may be +-infinity
};

// sup over a of ln(density_a(a) / density_b(b)). Exact up to fp error: the
// log-ratio is piecewise Moebius in e^(2a/scale) between adjacent centers,
// so the max over component centers, the two analytic tail limits, and one
// golden-section pass per inter-center interval covers every extremum.
// Throws Error when scales differ.
SupLogRatio sup_log_ratio(const LaplaceMixture& a, const LaplaceMixture& b);

// Exact effective epsilon of the design+mechanism pipeline on a concrete
// neighbor pair, via full outcome enumeration on both sides.
PrivacyReport exact_effective_epsilon(const SamplingDesign& d,
                                      const MechanismSpec& m,
                                      const NeighborPair& pair,
                                      std::uint64_t budget = kDefaultBudget);

// Per-stratum exact audit against a fixed base population: component s is
// the worst exact_effective_epsilon over added records (s, x) with x from
// `values` (and every cluster id, which only matters for cluster designs).
PrivacyReport stratified_audit(const SamplingDesign& d,
                               const MechanismSpec& m, const Population& p,
                               const std::vector<double>& values,
                               std::uint64_t budget = kDefaultBudget);

struct ScanResult {
  PrivacyReport report;
  NeighborPair witness;
  std::uint64_t pairs_audited = 0;
};

// Worst exact audit over every population of size <= max_size from the
// universe and every single-record addition from the universe's types.
ScanResult worst_case_scan(const SamplingDesign& d, const MechanismSpec& m,
                           const Universe& universe, int max_size,
                           std::uint64_t budget = kDefaultBudget);

// Statistically sound lower bound on the effective epsilon from sampled
// pipeline outputs: Clopper-Pearson bounds on threshold events at the
// noiseless output values seen in the samples, Bonferroni-corrected across
// candidates, so the reported bound holds with the given confidence
// overall. Requires n_samples >= 1000 and confidence in (0, 1).
PrivacyReport mc_effective_epsilon_lower(const SamplingDesign& d,
                                         const MechanismSpec& m,
                                         const NeighborPair& pair,
                                         std::int64_t n_samples,
                                         double confidence,
                                         SeededStream& rng);

// One cell of the stability-conjecture sweep: a single stratum of
// `stratum_size` identical records sampled without replacement at rate
// `rate` via randomized rounding, audited exactly. fitted_constant is
// (e^exact_eps - 1)/(eps * rate), the constant the conjectured
// ln(1 + O(eps) r) form would need (NaN when rate = 0).
struct ConjectureRow {
  double eps = 0.0;
  double rate = 0.0;
  std::int64_t stratum_size = 0;
  double exact_eps = 0.0;
  double fitted_constant = 0.0;
};

std::vector<ConjectureRow> conjecture_harness(
    const std::vector<double>& eps_grid, const std::vector<double>& rate_grid,
    const std::vector<std::int64_t>& size_grid,
    std::uint64_t budget = kDefaultBudget);

// One trial of the random-DP experiment: two clusters of n Bernoulli(1/2)
// values, audited exactly at the realized between-cluster gap.
struct RandomDpTrial {
  std::int64_t gap = 0;
  double exact_eps = 0.0;
};

struct RandomDpResult {
  std::vector<RandomDpTrial> trials;
  double median_exact = 0.0;
  double q10_exact = 0.0;
  double q90_exact = 0.0;
  double formula_eps = 0.0;  // random_dp_cluster_eps(eps, n)
};

// Draws `trials` cluster pairs, sums them with clamped_sum(0,1) + Laplace
// noise under the choose-1-of-2 design, and audits each against the worst
// added record (both clamp endpoints, both clusters). n <= 64 keeps the
// exact audits cheap.
RandomDpResult random_dp_harness(int n, double eps, int trials,
                                 std::uint64_t seed);

}  // namespace surveydp

#endif  // SURVEYDP_AUDITOR_HPP_
