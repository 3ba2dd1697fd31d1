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

#include "surveydp/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "surveydp/errors.hpp"

namespace surveydp {

AllocationRule AllocationRule::fixed(std::vector<std::int64_t> counts) {
  for (std::int64_t c : counts) {
    if (c < 0) throw Error("fixed counts must be non-negative");
  }
  AllocationRule r;
  r.kind = Kind::kFixed;
  r.counts = std::move(counts);
  return r;
}

AllocationRule AllocationRule::parity_demo() {
  AllocationRule r;
  r.kind = Kind::kParityDemo;
  return r;
}

AllocationRule AllocationRule::proportional_floor(std::int64_t total) {
  if (total < 0) throw Error("allocation total must be non-negative");
  AllocationRule r;
  r.kind = Kind::kProportionalFloor;
  r.total = total;
  return r;
}

AllocationRule AllocationRule::proportional_hamilton(std::int64_t total) {
  if (total < 0) throw Error("allocation total must be non-negative");
  AllocationRule r;
  r.kind = Kind::kProportionalHamilton;
  r.total = total;
  return r;
}

AllocationRule AllocationRule::huntington_hill(std::int64_t total) {
  if (total < 0) throw Error("allocation total must be non-negative");
  AllocationRule r;
  r.kind = Kind::kHuntingtonHill;
  r.total = total;
  return r;
}

AllocationRule AllocationRule::randomized_rounding(std::vector<double> rates) {
  for (double x : rates) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error("randomized_rounding rates must lie in [0, 1]");
    }
  }
  AllocationRule r;
  r.kind = Kind::kRandomizedRounding;
  r.rates = std::move(rates);
  return r;
}

std::string AllocationRule::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kFixed: {
      out << "fixed(";
      for (std::size_t i = 0; i < counts.size(); ++i) {
        out << (i ? "," : "") << counts[i];
      }
      out << ")";
      break;
    }
    case Kind::kParityDemo:
      out << "parity_demo";
      break;
    case Kind::kProportionalFloor:
      out << "proportional_floor(" << total << ")";
      break;
    case Kind::kProportionalHamilton:
      out << "proportional_hamilton(" << total << ")";
      break;
    case Kind::kHuntingtonHill:
      out << "huntington_hill(" << total << ")";
      break;
    case Kind::kRandomizedRounding: {
      out << "randomized_rounding(";
      for (std::size_t i = 0; i < rates.size(); ++i) {
        out << (i ? "," : "") << rates[i];
      }
      out << ")";
      break;
    }
  }
  return out.str();
}

namespace {

void check_sizes(const std::vector<std::int64_t>& sizes) {
  for (std::int64_t s : sizes) {
    if (s < 0) throw Error("stratum sizes must be non-negative");
  }
}

AllocationOutcome singleton(std::vector<std::int64_t> counts) {
  AllocationOutcome out;
  out.support.push_back({std::move(counts), 1.0});
  return out;
}

std::vector<std::int64_t> hamilton_counts(
    std::int64_t total, const std::vector<std::int64_t>& sizes) {
  const std::int64_t pop =
      std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
  const std::size_t k = sizes.size();
  if (pop == 0) {
    if (total > 0) {
      throw Error("proportional allocation of " + std::to_string(total) +
                  " units from an empty population");
    }
    return std::vector<std::int64_t>(k, 0);
  }
  std::vector<std::int64_t> counts(k, 0);
  std::vector<double> remainders(k, 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double quota = static_cast<double>(total) *
                         static_cast<double>(sizes[i]) /
                         static_cast<double>(pop);
    counts[i] = static_cast<std::int64_t>(std::floor(quota));
    remainders[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  // Largest remainder, ties to the lowest stratum index.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&remainders](std::size_t a, std::size_t b) {
                     return remainders[a] > remainders[b];
                   });
  for (std::int64_t left = total - assigned; left > 0; --left) {
    counts[order[static_cast<std::size_t>(total - assigned - left)]] += 1;
  }
  return counts;
}

std::vector<std::int64_t> huntington_hill_counts(
    std::int64_t total, const std::vector<std::int64_t>& sizes) {
  const std::size_t k = sizes.size();
  const std::int64_t pop =
      std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
  if (pop == 0) {
    if (total > 0) {
      throw Error("huntington_hill cannot seat " + std::to_string(total) +
                  " units from an empty population");
    }
    return std::vector<std::int64_t>(k, 0);
  }
  std::int64_t nonempty = 0;
  for (std::int64_t s : sizes) nonempty += s > 0 ? 1 : 0;
  if (total < nonempty) {
    throw Error("huntington_hill needs total >= " + std::to_string(nonempty) +
                " (one per nonempty stratum), got " + std::to_string(total));
  }
  std::vector<std::int64_t> seats(k, 0);
  for (std::size_t i = 0; i < k; ++i) seats[i] = sizes[i] > 0 ? 1 : 0;
  for (std::int64_t step = 0; step < total - nonempty; ++step) {
    // Priority s_i / sqrt(a(a+1)); ties to the lowest index via strict >.
    std::size_t best = k;
    double best_priority = -1.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (sizes[i] == 0) continue;
      const double a = static_cast<double>(seats[i]);
      const double priority =
          static_cast<double>(sizes[i]) / std::sqrt(a * (a + 1.0));
      if (priority > best_priority) {
        best = i;
        best_priority = priority;
      }
    }
    seats[best] += 1;
  }
  return seats;
}

// Two-point law of one stratum under randomized rounding. frac is snapped
// to 0 when within 1e-12 of an integer target, so exact targets stay
// deterministic under fp noise.
struct TwoPoint {
  std::int64_t lo;
  double prob_hi;  // probability of lo + 1
};

TwoPoint rounding_law(double rate, std::int64_t size) {
  const double target = rate * static_cast<double>(size);
  double lo = std::floor(target);
  double frac = target - lo;
  constexpr double kSnap = 1e-12;
  if (frac < kSnap) {
    frac = 0.0;
  } else if (frac > 1.0 - kSnap) {
    lo += 1.0;
    frac = 0.0;
  }
  return TwoPoint{static_cast<std::int64_t>(lo), frac};
}

AllocationOutcome randomized_rounding_outcome(
    const std::vector<double>& rates, const std::vector<std::int64_t>& sizes) {
  if (rates.size() != sizes.size()) {
    throw Error("randomized_rounding has " + std::to_string(rates.size()) +
                " rates but " + std::to_string(sizes.size()) + " strata");
  }
  AllocationOutcome out;
  out.support.push_back({{}, 1.0});
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const TwoPoint law = rounding_law(rates[i], sizes[i]);
    std::vector<AllocationOutcome::Entry> next;
    next.reserve(out.support.size() * 2);
    for (const auto& entry : out.support) {
      if (law.prob_hi < 1.0) {
        auto lo = entry;
        lo.counts.push_back(law.lo);
        lo.probability *= 1.0 - law.prob_hi;
        next.push_back(std::move(lo));
      }
      if (law.prob_hi > 0.0) {
        auto hi = entry;
        hi.counts.push_back(law.lo + 1);
        hi.probability *= law.prob_hi;
        next.push_back(std::move(hi));
      }
    }
    out.support = std::move(next);
  }
  return out;
}

}  // namespace

AllocationOutcome allocate(const AllocationRule& rule,
                           const std::vector<std::int64_t>& sizes) {
  check_sizes(sizes);
  switch (rule.kind) {
    case AllocationRule::Kind::kFixed:
      if (rule.counts.size() != sizes.size()) {
        throw Error("fixed allocation has " +
                    std::to_string(rule.counts.size()) + " counts but " +
                    std::to_string(sizes.size()) + " strata");
      }
      return singleton(rule.counts);
    case AllocationRule::Kind::kParityDemo: {
      if (sizes.size() != 1) {
        throw Error("parity_demo is a single-stratum rule");
      }
      const std::int64_t n = sizes[0];
      return singleton({n % 2 == 0 ? n : n - 1});
    }
    case AllocationRule::Kind::kProportionalFloor: {
      const std::int64_t pop =
          std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
      if (pop == 0) {
        if (rule.total > 0) {
          throw Error("proportional allocation of " +
                      std::to_string(rule.total) +
                      " units from an empty population");
        }
        return singleton(std::vector<std::int64_t>(sizes.size(), 0));
      }
      std::vector<std::int64_t> counts(sizes.size(), 0);
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        counts[i] = static_cast<std::int64_t>(
            std::floor(static_cast<double>(rule.total) *
                       static_cast<double>(sizes[i]) /
                       static_cast<double>(pop)));
      }
      return singleton(std::move(counts));
    }
    case AllocationRule::Kind::kProportionalHamilton:
      return singleton(hamilton_counts(rule.total, sizes));
    case AllocationRule::Kind::kHuntingtonHill:
      return singleton(huntington_hill_counts(rule.total, sizes));
    case AllocationRule::Kind::kRandomizedRounding:
      return randomized_rounding_outcome(rule.rates, sizes);
  }
  throw Error("unknown allocation rule");
}

namespace {

// Worst |X - Y| over the monotone coupling of two per-stratum two-point
// laws: both indicators driven by one shared uniform, floor paired with
// floor. For deterministic rules both laws are single points and this is
// plain |difference|.
std::int64_t coupled_stratum_distance(const TwoPoint& a, const TwoPoint& b) {
  std::int64_t worst = 0;
  // Coupling regions: u < min(p_a, p_b) -> both hi; u >= max -> both lo;
  // between -> exactly one hi.
  const double lo_p = std::min(a.prob_hi, b.prob_hi);
  const double hi_p = std::max(a.prob_hi, b.prob_hi);
  if (lo_p > 0.0) worst = std::max(worst, std::abs((a.lo + 1) - (b.lo + 1)));
  if (hi_p < 1.0) worst = std::max(worst, std::abs(a.lo - b.lo));
  if (hi_p - lo_p > 0.0) {
    if (a.prob_hi > b.prob_hi) {
      worst = std::max(worst, std::abs((a.lo + 1) - b.lo));
    } else {
      worst = std::max(worst, std::abs(a.lo - (b.lo + 1)));
    }
  }
  return worst;
}

// L1 sensitivity of one (sizes, stratum) cell, under the coupling for
// randomized rules and exact evaluation otherwise.
std::int64_t cell_l1(const AllocationRule& rule,
                     const std::vector<std::int64_t>& sizes, std::size_t s) {
  std::vector<std::int64_t> grown = sizes;
  grown[s] += 1;
  if (rule.randomized()) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      sum += coupled_stratum_distance(rounding_law(rule.rates[i], sizes[i]),
                                      rounding_law(rule.rates[i], grown[i]));
    }
    return sum;
  }
  const auto before = allocate(rule, sizes).support.front().counts;
  const auto after = allocate(rule, grown).support.front().counts;
  std::int64_t l1 = 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    l1 += std::abs(before[i] - after[i]);
  }
  return l1;
}

bool needs_feasible_total(const AllocationRule& rule) {
  return rule.kind == AllocationRule::Kind::kProportionalFloor ||
         rule.kind == AllocationRule::Kind::kProportionalHamilton ||
         rule.kind == AllocationRule::Kind::kHuntingtonHill;
}

}  // namespace

SensitivityReport global_sensitivity_scan(const AllocationRule& rule,
                                          int num_strata,
                                          std::int64_t max_stratum_size,
                                          std::uint64_t budget,
                                          const ScanEmitter& emit) {
  if (num_strata < 1) throw Error("scan needs at least one stratum");
  if (max_stratum_size < 0) throw Error("max_stratum_size must be >= 0");
  if (rule.kind == AllocationRule::Kind::kParityDemo && num_strata != 1) {
    throw Error("parity_demo is a single-stratum rule");
  }

  const std::uint64_t per_size =
      static_cast<std::uint64_t>(max_stratum_size) + 1;
  std::uint64_t grid = 1;
  for (int i = 0; i < num_strata; ++i) {
    if (grid > budget / per_size + 1) {
      throw BudgetError("sensitivity scan", ~std::uint64_t{0}, budget);
    }
    grid *= per_size;
  }
  const std::uint64_t required = grid * static_cast<std::uint64_t>(num_strata);
  if (required > budget) {
    throw BudgetError("sensitivity scan", required, budget);
  }

  SensitivityReport report;
  report.rule = rule.describe();
  report.num_strata = num_strata;
  report.max_stratum_size = max_stratum_size;

  std::vector<std::int64_t> sizes(static_cast<std::size_t>(num_strata), 0);
  const bool check_total = needs_feasible_total(rule);
  while (true) {
    const std::int64_t pop =
        std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
    std::int64_t nonempty = 0;
    for (std::int64_t v : sizes) nonempty += v > 0 ? 1 : 0;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      // Base and grown vectors must both support drawing `total` units
      // without replacement; smaller populations never feed this rule.
      bool feasible = !check_total || pop >= rule.total;
      if (feasible && rule.kind == AllocationRule::Kind::kHuntingtonHill) {
        // Adding a unit can wake an empty stratum, needing one more seat.
        const std::int64_t grown_nonempty =
            nonempty + (sizes[s] == 0 ? 1 : 0);
        feasible = rule.total >= grown_nonempty;
      }
      if (!feasible) {
        report.skipped_infeasible += 1;
        continue;
      }
      const std::int64_t l1 = cell_l1(rule, sizes, s);
      report.scanned_cells += 1;
      if (emit) emit(sizes, static_cast<int>(s) + 1, l1);
      if (l1 > report.observed_gs) {
        report.observed_gs = l1;
        SensitivityWitness w;
        w.sizes = sizes;
        w.stratum = static_cast<int>(s) + 1;
        if (!rule.randomized()) {
          w.counts_before = allocate(rule, sizes).support.front().counts;
          std::vector<std::int64_t> grown = sizes;
          grown[s] += 1;
          w.counts_after = allocate(rule, grown).support.front().counts;
        }
        report.witness = std::move(w);
      }
    }
    // Odometer increment over the size grid.
    std::size_t pos = 0;
    while (pos < sizes.size() && sizes[pos] == max_stratum_size) {
      sizes[pos] = 0;
      ++pos;
    }
    if (pos == sizes.size()) break;
    sizes[pos] += 1;
  }
  return report;
}

}  // namespace surveydp
