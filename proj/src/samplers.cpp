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

#include "surveydp/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "surveydp/errors.hpp"

namespace surveydp {

WithinCluster WithinCluster::poisson(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error("within-cluster rate must lie in [0, 1]");
  }
  WithinCluster w;
  w.kind = Kind::kPoisson;
  w.rate = rate;
  return w;
}

SamplingDesign SamplingDesign::poisson(std::vector<double> rates) {
  if (rates.empty()) throw Error("poisson design needs at least one rate");
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw Error("poisson rates must lie in [0, 1]");
    }
  }
  SamplingDesign d;
  d.kind = Kind::kPoisson;
  d.rates = std::move(rates);
  return d;
}

SamplingDesign SamplingDesign::swor(AllocationRule alloc) {
  SamplingDesign d;
  d.kind = Kind::kSwor;
  d.alloc = std::move(alloc);
  return d;
}

SamplingDesign SamplingDesign::cluster(int choose, WithinCluster within) {
  if (choose < 1) throw Error("cluster design must choose at least 1 cluster");
  SamplingDesign d;
  d.kind = Kind::kCluster;
  d.choose = choose;
  d.within = within;
  return d;
}

std::string SamplingDesign::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kPoisson: {
      out << "poisson(";
      for (std::size_t i = 0; i < rates.size(); ++i) {
        out << (i ? "," : "") << rates[i];
      }
      out << ")";
      break;
    }
    case Kind::kSwor:
      out << "swor(" << alloc.describe() << ")";
      break;
    case Kind::kCluster:
      out << "cluster(choose=" << choose << ",within="
          << (within.kind == WithinCluster::Kind::kCensus
                  ? std::string("census")
                  : "poisson(" + std::to_string(within.rate) + ")")
          << ")";
      break;
  }
  return out.str();
}

namespace {

double stratum_rate(const SamplingDesign& d, int stratum) {
  if (static_cast<std::size_t>(stratum) > d.rates.size()) {
    throw Error("poisson design has " + std::to_string(d.rates.size()) +
                " rates but record sits in stratum " +
                std::to_string(stratum));
  }
  return d.rates[static_cast<std::size_t>(stratum - 1)];
}

Population subset_by_indices(const Population& p,
                             const std::vector<std::int32_t>& indices) {
  std::vector<Record> recs;
  recs.reserve(indices.size());
  for (std::int32_t i : indices) {
    recs.push_back(p.records()[static_cast<std::size_t>(i)]);
  }
  return Population(std::move(recs), p.num_strata(), p.num_clusters());
}

// Record positions grouped by stratum (1-based ids -> index 0..k-1).
std::vector<std::vector<std::int32_t>> positions_by_stratum(
    const Population& p) {
  std::vector<std::vector<std::int32_t>> by_stratum(
      static_cast<std::size_t>(p.num_strata()));
  for (std::size_t i = 0; i < p.records().size(); ++i) {
    by_stratum[static_cast<std::size_t>(p.records()[i].stratum - 1)]
        .push_back(static_cast<std::int32_t>(i));
  }
  return by_stratum;
}

std::vector<std::vector<std::int32_t>> positions_by_cluster(
    const Population& p) {
  std::vector<std::vector<std::int32_t>> by_cluster(
      static_cast<std::size_t>(p.num_clusters()));
  for (std::size_t i = 0; i < p.records().size(); ++i) {
    by_cluster[static_cast<std::size_t>(p.records()[i].cluster - 1)]
        .push_back(static_cast<std::int32_t>(i));
  }
  return by_cluster;
}

std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

// Worst case count of a poisson enumeration: one branch per record with a
// rate strictly inside (0,1); saturating.
std::uint64_t poisson_outcome_bound(const SamplingDesign& d,
                                    const Population& p) {
  std::uint64_t bound = 1;
  for (const Record& r : p.records()) {
    const double rate = stratum_rate(d, r.stratum);
    if (rate > 0.0 && rate < 1.0) {
      if (bound > (std::uint64_t{1} << 62)) return ~std::uint64_t{0};
      bound *= 2;
    }
  }
  return bound;
}

void enumerate_poisson(const SamplingDesign& d, const Population& p,
                       OutcomeDistribution* out) {
  // Depth-first over records; zero-probability branches pruned, so rates 0
  // and 1 cost nothing.
  std::vector<std::int32_t> chosen;
  const auto& records = p.records();
  auto recurse = [&](auto&& self, std::size_t i, double prob) -> void {
    if (i == records.size()) {
      out->entries.push_back({subset_by_indices(p, chosen), chosen, prob});
      return;
    }
    const double rate = stratum_rate(d, records[i].stratum);
    if (1.0 - rate > 0.0) {
      self(self, i + 1, prob * (1.0 - rate));
    }
    if (rate > 0.0) {
      chosen.push_back(static_cast<std::int32_t>(i));
      self(self, i + 1, prob * rate);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, 1.0);
}

// All size-`take` index subsets of `pool`, appended to `out` crossed with
// everything already there. Keeps per-entry probability factors separate.
void cross_with_combinations(
    const std::vector<std::int32_t>& pool, std::int64_t take,
    double probability_factor,
    std::vector<std::pair<std::vector<std::int32_t>, double>>* partial) {
  std::vector<std::pair<std::vector<std::int32_t>, double>> next;
  std::vector<std::int32_t> combo;
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<std::int64_t>(combo.size()) == take) {
      for (const auto& [indices, prob] : *partial) {
        std::vector<std::int32_t> merged = indices;
        merged.insert(merged.end(), combo.begin(), combo.end());
        next.push_back({std::move(merged), prob * probability_factor});
      }
      return;
    }
    const std::size_t needed =
        static_cast<std::size_t>(take) - combo.size();
    for (std::size_t i = start; i + needed <= pool.size(); ++i) {
      combo.push_back(pool[i]);
      self(self, i + 1);
      combo.pop_back();
    }
  };
  recurse(recurse, 0);
  *partial = std::move(next);
}

struct SworPlan {
  std::vector<std::int64_t> takes;  // clamped per-stratum counts
  bool truncated = false;
};

SworPlan plan_swor_entry(const std::vector<std::int64_t>& counts,
                         const std::vector<std::int64_t>& sizes,
                         bool clamp) {
  if (counts.size() != sizes.size()) {
    throw Error("allocation produced " + std::to_string(counts.size()) +
                " counts for " + std::to_string(sizes.size()) + " strata");
  }
  SworPlan plan;
  plan.takes = counts;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > sizes[i]) {
      if (!clamp) {
        throw InfeasibleAllocationError(static_cast<int>(i) + 1, counts[i],
                                        sizes[i]);
      }
      plan.takes[i] = sizes[i];
      plan.truncated = true;
    }
  }
  return plan;
}

std::uint64_t swor_outcome_bound(const AllocationOutcome& alloc,
                                 const std::vector<std::int64_t>& sizes) {
  std::uint64_t bound = 0;
  for (const auto& entry : alloc.support) {
    std::uint64_t per_entry = 1;
    for (std::size_t i = 0; i < sizes.size() && i < entry.counts.size();
         ++i) {
      const std::uint64_t take = static_cast<std::uint64_t>(
          std::min(entry.counts[i], sizes[i]));
      const std::uint64_t ways = binomial_coefficient(
          static_cast<std::uint64_t>(sizes[i]), take);
      if (ways != 0 && per_entry > (~std::uint64_t{0}) / ways) {
        return ~std::uint64_t{0};
      }
      per_entry *= ways;
    }
    if ((~std::uint64_t{0}) - bound < per_entry) return ~std::uint64_t{0};
    bound += per_entry;
  }
  return bound;
}

void enumerate_swor(const SamplingDesign& d, const Population& p,
                    OutcomeDistribution* out) {
  const std::vector<std::int64_t> sizes = strata_sizes(p);
  const auto by_stratum = positions_by_stratum(p);
  const AllocationOutcome alloc = allocate(d.alloc, sizes);
  for (const auto& alloc_entry : alloc.support) {
    const SworPlan plan =
        plan_swor_entry(alloc_entry.counts, sizes, /*clamp=*/true);
    out->truncated_allocation |= plan.truncated;
    std::vector<std::pair<std::vector<std::int32_t>, double>> partial;
    partial.push_back({{}, alloc_entry.probability});
    for (std::size_t s = 0; s < by_stratum.size(); ++s) {
      const double ways = static_cast<double>(binomial_coefficient(
          static_cast<std::uint64_t>(sizes[s]),
          static_cast<std::uint64_t>(plan.takes[s])));
      cross_with_combinations(by_stratum[s], plan.takes[s], 1.0 / ways,
                              &partial);
    }
    for (auto& [indices, prob] : partial) {
      std::sort(indices.begin(), indices.end());
      out->entries.push_back({subset_by_indices(p, indices),
                              std::move(indices), prob});
    }
  }
}

std::uint64_t cluster_outcome_bound(const SamplingDesign& d,
                                    const Population& p) {
  const std::uint64_t picks = binomial_coefficient(
      static_cast<std::uint64_t>(p.num_clusters()),
      static_cast<std::uint64_t>(d.choose));
  if (d.within.kind == WithinCluster::Kind::kCensus) return picks;
  // Every record of every chosen cluster can branch; bound by the largest
  // chosen-cluster load = all records (coarse but safe).
  std::uint64_t inner = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (inner > (std::uint64_t{1} << 62)) return ~std::uint64_t{0};
    inner *= 2;
  }
  if (picks != 0 && inner > (~std::uint64_t{0}) / picks) {
    return ~std::uint64_t{0};
  }
  return picks * inner;
}

void enumerate_cluster(const SamplingDesign& d, const Population& p,
                       OutcomeDistribution* out) {
  if (d.choose > p.num_clusters()) {
    throw Error("cluster design chooses " + std::to_string(d.choose) +
                " of " + std::to_string(p.num_clusters()) + " clusters");
  }
  const auto by_cluster = positions_by_cluster(p);
  const double pick_prob =
      1.0 / static_cast<double>(binomial_coefficient(
                static_cast<std::uint64_t>(p.num_clusters()),
                static_cast<std::uint64_t>(d.choose)));
  std::vector<int> chosen_clusters;
  auto emit_choice = [&]() {
    std::vector<std::int32_t> pool;
    for (int c : chosen_clusters) {
      const auto& members = by_cluster[static_cast<std::size_t>(c)];
      pool.insert(pool.end(), members.begin(), members.end());
    }
    std::sort(pool.begin(), pool.end());
    if (d.within.kind == WithinCluster::Kind::kCensus) {
      out->entries.push_back(
          {subset_by_indices(p, pool), pool, pick_prob});
      return;
    }
    const double rate = d.within.rate;
    std::vector<std::int32_t> kept;
    auto recurse = [&](auto&& self, std::size_t i, double prob) -> void {
      if (i == pool.size()) {
        out->entries.push_back({subset_by_indices(p, kept), kept,
                                pick_prob * prob});
        return;
      }
      if (1.0 - rate > 0.0) self(self, i + 1, prob * (1.0 - rate));
      if (rate > 0.0) {
        kept.push_back(pool[i]);
        self(self, i + 1, prob * rate);
        kept.pop_back();
      }
    };
    recurse(recurse, 0, 1.0);
  };
  auto choose_recurse = [&](auto&& self, int start) -> void {
    if (static_cast<int>(chosen_clusters.size()) == d.choose) {
      emit_choice();
      return;
    }
    for (int c = start; c < p.num_clusters(); ++c) {
      chosen_clusters.push_back(c);
      self(self, c + 1);
      chosen_clusters.pop_back();
    }
  };
  choose_recurse(choose_recurse, 0);
}

}  // namespace

Population draw(const SamplingDesign& d, const Population& p,
                SeededStream& rng) {
  switch (d.kind) {
    case SamplingDesign::Kind::kPoisson: {
      std::vector<std::int32_t> kept;
      for (std::size_t i = 0; i < p.records().size(); ++i) {
        if (rng.bernoulli(stratum_rate(d, p.records()[i].stratum))) {
          kept.push_back(static_cast<std::int32_t>(i));
        }
      }
      return subset_by_indices(p, kept);
    }
    case SamplingDesign::Kind::kSwor: {
      const std::vector<std::int64_t> sizes = strata_sizes(p);
      const AllocationOutcome alloc = allocate(d.alloc, sizes);
      // Pick an allocation vector from the support.
      std::size_t pick = alloc.support.size() - 1;
      if (alloc.support.size() > 1) {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i < alloc.support.size(); ++i) {
          acc += alloc.support[i].probability;
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      const SworPlan plan = plan_swor_entry(alloc.support[pick].counts,
                                            sizes, /*clamp=*/false);
      const auto by_stratum = positions_by_stratum(p);
      std::vector<std::int32_t> kept;
      for (std::size_t s = 0; s < by_stratum.size(); ++s) {
        // Partial Fisher-Yates: uniform subset of size takes[s].
        std::vector<std::int32_t> pool = by_stratum[s];
        for (std::int64_t t = 0; t < plan.takes[s]; ++t) {
          const std::uint64_t j =
              static_cast<std::uint64_t>(t) +
              rng.uniform_int(pool.size() - static_cast<std::size_t>(t));
          std::swap(pool[static_cast<std::size_t>(t)],
                    pool[static_cast<std::size_t>(j)]);
          kept.push_back(pool[static_cast<std::size_t>(t)]);
        }
      }
      std::sort(kept.begin(), kept.end());
      return subset_by_indices(p, kept);
    }
    case SamplingDesign::Kind::kCluster: {
      if (d.choose > p.num_clusters()) {
        throw Error("cluster design chooses " + std::to_string(d.choose) +
                    " of " + std::to_string(p.num_clusters()) + " clusters");
      }
      // Uniform `choose`-subset of cluster ids via partial Fisher-Yates.
      std::vector<int> ids(static_cast<std::size_t>(p.num_clusters()));
      std::iota(ids.begin(), ids.end(), 0);
      for (int t = 0; t < d.choose; ++t) {
        const std::uint64_t j =
            static_cast<std::uint64_t>(t) +
            rng.uniform_int(ids.size() - static_cast<std::size_t>(t));
        std::swap(ids[static_cast<std::size_t>(t)],
                  ids[static_cast<std::size_t>(j)]);
      }
      std::vector<bool> chosen(static_cast<std::size_t>(p.num_clusters()),
                               false);
      for (int t = 0; t < d.choose; ++t) {
        chosen[static_cast<std::size_t>(ids[static_cast<std::size_t>(t)])] =
            true;
      }
      std::vector<std::int32_t> kept;
      for (std::size_t i = 0; i < p.records().size(); ++i) {
        if (!chosen[static_cast<std::size_t>(p.records()[i].cluster - 1)]) {
          continue;
        }
        if (d.within.kind == WithinCluster::Kind::kCensus ||
            rng.bernoulli(d.within.rate)) {
          kept.push_back(static_cast<std::int32_t>(i));
        }
      }
      return subset_by_indices(p, kept);
    }
  }
  throw Error("unknown sampling design");
}

OutcomeDistribution enumerate_outcomes(const SamplingDesign& d,
                                       const Population& p,
                                       std::uint64_t budget) {
  std::uint64_t required = 0;
  switch (d.kind) {
    case SamplingDesign::Kind::kPoisson:
      required = poisson_outcome_bound(d, p);
      break;
    case SamplingDesign::Kind::kSwor:
      required = swor_outcome_bound(allocate(d.alloc, strata_sizes(p)),
                                    strata_sizes(p));
      break;
    case SamplingDesign::Kind::kCluster:
      required = cluster_outcome_bound(d, p);
      break;
  }
  if (required > budget) {
    throw BudgetError("outcome enumeration", required, budget);
  }
  OutcomeDistribution out;
  switch (d.kind) {
    case SamplingDesign::Kind::kPoisson:
      enumerate_poisson(d, p, &out);
      break;
    case SamplingDesign::Kind::kSwor:
      enumerate_swor(d, p, &out);
      break;
    case SamplingDesign::Kind::kCluster:
      enumerate_cluster(d, p, &out);
      break;
  }
  return out;
}

double inclusion_probability(const SamplingDesign& d, const Population& p,
                             std::size_t index, std::uint64_t budget) {
  if (index >= p.size()) throw Error("record index out of range");
  if (d.kind == SamplingDesign::Kind::kPoisson) {
    return stratum_rate(d, p.records()[index].stratum);
  }
  const OutcomeDistribution outcomes = enumerate_outcomes(d, p, budget);
  double prob = 0.0;
  for (const auto& entry : outcomes.entries) {
    if (std::binary_search(entry.indices.begin(), entry.indices.end(),
                           static_cast<std::int32_t>(index))) {
      prob += entry.probability;
    }
  }
  return prob;
}

std::optional<double> inclusion_correlation(const SamplingDesign& d,
                                            const Population& p,
                                            std::size_t i, std::size_t j,
                                            std::uint64_t budget) {
  if (i >= p.size() || j >= p.size()) throw Error("record index out of range");
  if (i == j) throw Error("correlation needs two distinct records");
  const OutcomeDistribution outcomes = enumerate_outcomes(d, p, budget);
  double pi = 0.0;
  double pj = 0.0;
  double pij = 0.0;
  for (const auto& entry : outcomes.entries) {
    const bool has_i = std::binary_search(entry.indices.begin(),
                                          entry.indices.end(),
                                          static_cast<std::int32_t>(i));
    const bool has_j = std::binary_search(entry.indices.begin(),
                                          entry.indices.end(),
                                          static_cast<std::int32_t>(j));
    if (has_i) pi += entry.probability;
    if (has_j) pj += entry.probability;
    if (has_i && has_j) pij += entry.probability;
  }
  const double var_i = pi * (1.0 - pi);
  const double var_j = pj * (1.0 - pj);
  constexpr double kDegenerate = 1e-15;
  if (var_i < kDegenerate || var_j < kDegenerate) return std::nullopt;
  const double corr = (pij - pi * pj) / std::sqrt(var_i * var_j);
  return std::clamp(corr, -1.0, 1.0);
}

}  // namespace surveydp
