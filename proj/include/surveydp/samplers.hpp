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

#ifndef SURVEYDP_SAMPLERS_HPP_
#define SURVEYDP_SAMPLERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surveydp/allocation.hpp"
#include "surveydp/population.hpp"
#include "surveydp/rng.hpp"

namespace surveydp {

// Second sampling stage inside each chosen cluster.
struct WithinCluster {
  enum class Kind { kCensus, kPoisson };
  Kind kind = Kind::kCensus;
  double rate = 1.0;  // poisson only

  static WithinCluster census() { return WithinCluster{}; }
  static WithinCluster poisson(double rate);
};

// A survey sampling design: the random map from a population to the dataset
// the mechanism actually sees.
struct SamplingDesign {
  enum class Kind { kPoisson, kSwor, kCluster };

  Kind kind = Kind::kPoisson;
  std::vector<double> rates;  // poisson: per-stratum inclusion rates
  AllocationRule alloc;       // swor: per-stratum counts from this rule
  int choose = 1;             // cluster: how many clusters to keep
  WithinCluster within;       // cluster: second stage

  // Per-record independent inclusion, rate chosen by the record's stratum.
  // Throws Error when any rate is outside [0, 1] or rates is empty.
  static SamplingDesign poisson(std::vector<double> rates);
  // Per-stratum uniform without-replacement draws of allocated counts.
  static SamplingDesign swor(AllocationRule alloc);
  // Uniformly choose `choose` clusters, then run the within stage on them.
  static SamplingDesign cluster(int choose, WithinCluster within);

  std::string describe() const;
};

// Exact finite law of a design on a concrete population.
struct OutcomeDistribution {
  struct Entry {
    Population subset;
    // Positions into the source population's record vector, ascending.
    std::vector<std::int32_t> indices;
    double probability;
  };
  std::vector<Entry> entries;
  // Set when a without-replacement allocation asked a stratum for more
  // records than it holds and was clamped down (audit mode keeps going so
  // neighbor scans stay total).
  bool truncated_allocation = false;
};

// One sample; deterministic given the stream. Throws
// InfeasibleAllocationError when a swor allocation exceeds a stratum size.
Population draw(const SamplingDesign& d, const Population& p,
                SeededStream& rng);

// The complete outcome law. Entries carry exact probabilities summing to 1.
// Throws BudgetError (with the required outcome count) before materializing
// anything too large.
OutcomeDistribution enumerate_outcomes(const SamplingDesign& d,
                                       const Population& p,
                                       std::uint64_t budget = kDefaultBudget);

// Exact marginal inclusion probability of the record at `index`; closed
// form for poisson, enumeration otherwise.
double inclusion_probability(const SamplingDesign& d, const Population& p,
                             std::size_t index,
                             std::uint64_t budget = kDefaultBudget);

// Pearson correlation of the two inclusion indicators under the exact law;
// nullopt when either indicator is degenerate.
std::optional<double> inclusion_correlation(
    const SamplingDesign& d, const Population& p, std::size_t i,
    std::size_t j, std::uint64_t budget = kDefaultBudget);

}  // namespace surveydp

#endif  // SURVEYDP_SAMPLERS_HPP_
