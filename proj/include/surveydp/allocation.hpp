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

#ifndef SURVEYDP_ALLOCATION_HPP_
#define SURVEYDP_ALLOCATION_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "surveydp/population.hpp"

namespace surveydp {

// Maps per-stratum population sizes to per-stratum sample counts. Sample
// size that depends on the data is exactly what degrades privacy, so the
// rule is the object under study, not a detail.
struct AllocationRule {
  enum class Kind {
    kFixed,
    kParityDemo,
    kProportionalFloor,
    kProportionalHamilton,
    kHuntingtonHill,
    kRandomizedRounding,
  };

  Kind kind = Kind::kFixed;
  std::vector<std::int64_t> counts;  // fixed
  std::int64_t total = 0;            // floor / hamilton / huntington_hill
  std::vector<double> rates;         // randomized_rounding

  static AllocationRule fixed(std::vector<std::int64_t> counts);
  // k=1 demo rule: n for even n, n-1 for odd n. The smallest rule whose
  // sensitivity exceeds 1.
  static AllocationRule parity_demo();
  static AllocationRule proportional_floor(std::int64_t total);
  static AllocationRule proportional_hamilton(std::int64_t total);
  static AllocationRule huntington_hill(std::int64_t total);
  static AllocationRule randomized_rounding(std::vector<double> rates);

  bool randomized() const { return kind == Kind::kRandomizedRounding; }
  std::string describe() const;
};

// Finite distribution over count vectors; deterministic rules have a
// singleton support.
struct AllocationOutcome {
  struct Entry {
    std::vector<std::int64_t> counts;
    double probability;
  };
  std::vector<Entry> support;

  bool deterministic() const { return support.size() == 1; }
};

// Evaluates the rule on per-stratum sizes. Throws Error on negative sizes,
// on size/parameter arity mismatches, and for huntington_hill when
// total < number of nonempty strata or when all strata are empty with
// total > 0 (each nonempty stratum must seat at least one unit).
AllocationOutcome allocate(const AllocationRule& rule,
                           const std::vector<std::int64_t>& sizes);

// The argmax cell of a sensitivity scan, for reproduction.
struct SensitivityWitness {
  std::vector<std::int64_t> sizes;
  int stratum = 0;  // 1-based stratum of the added unit
  std::vector<std::int64_t> counts_before;
  std::vector<std::int64_t> counts_after;
};

struct SensitivityReport {
  std::int64_t observed_gs = 0;
  std::optional<SensitivityWitness> witness;
  std::string rule;
  int num_strata = 0;
  std::int64_t max_stratum_size = 0;
  std::uint64_t scanned_cells = 0;
  std::uint64_t skipped_infeasible = 0;
};

// Called once per scanned (sizes, stratum) cell with its L1 change.
using ScanEmitter = std::function<void(
    const std::vector<std::int64_t>& sizes, int stratum, std::int64_t l1)>;

// Exhaustive sensitivity measurement: every size vector with entries in
// [0, max_stratum_size] and every single-unit addition. For rules drawing a
// fixed total, vectors whose sum cannot cover the total are infeasible for
// without-replacement sampling and are skipped (counted in the report);
// so are huntington_hill cells with fewer seats than nonempty strata.
// Randomized rules are compared through the monotone coupling of the
// per-stratum two-point laws (floor with floor), which reduces to plain L1
// for deterministic rules. Throws BudgetError when the grid exceeds budget.
SensitivityReport global_sensitivity_scan(
    const AllocationRule& rule, int num_strata, std::int64_t max_stratum_size,
    std::uint64_t budget = kDefaultBudget, const ScanEmitter& emit = {});

}  // namespace surveydp

#endif  // SURVEYDP_ALLOCATION_HPP_
