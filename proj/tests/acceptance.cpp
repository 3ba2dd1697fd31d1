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
// Release gate: ten numbered criteria covering the headline guarantees.
// Every case prints one "[A#] PASS/FAIL" line; reference values are
// evaluated inline from the closed forms so a regression in the library's
// bound helpers cannot mask an auditor regression.

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "surveydp/allocation.hpp"
#include "surveydp/auditor.hpp"
#include "surveydp/bounds.hpp"
#include "surveydp/mechanisms.hpp"
#include "surveydp/population.hpp"
#include "surveydp/rng.hpp"
#include "surveydp/samplers.hpp"

using namespace surveydp;

namespace {

// Prints the criterion verdict when the case ends, even on early bail-out.
struct Gate {
  const char* tag;
  bool ok = true;
  std::string note;

  explicit Gate(const char* t) : tag(t) {}
  ~Gate() {
    std::printf("[%s] %s%s%s\n", tag, ok ? "PASS" : "FAIL",
                note.empty() ? "" : " ", note.c_str());
    std::fflush(stdout);
  }

  void append(const char* fmt, ...) {
    char buf[240];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    if (!note.empty()) note += "; ";
    note += buf;
  }
};

#define GATE_CHECK(gate, cond)           \
  do {                                   \
    const bool gate_ok_ = (cond);        \
    (gate).ok &= gate_ok_;               \
    CHECK_MESSAGE(gate_ok_, #cond);      \
  } while (0)

std::chrono::steady_clock::time_point tick() {
  return std::chrono::steady_clock::now();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(tick() - start).count();
}

Population identical_units(int n) {
  std::vector<Record> records(static_cast<std::size_t>(n),
                              Record{1, 1, 1.0});
  return Population(std::move(records), 1, 1);
}

// `left` unit-valued records in cluster 1, `right` in cluster 2.
Population two_cluster_population(int left, int right) {
  std::vector<Record> records;
  records.reserve(static_cast<std::size_t>(left + right));
  for (int i = 0; i < left; ++i) records.push_back(Record{1, 1, 1.0});
  for (int i = 0; i < right; ++i) records.push_back(Record{1, 2, 1.0});
  return Population(std::move(records), 1, 2);
}

std::string join64(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::int64_t l1_between(const std::vector<std::int64_t>& a,
                        const std::vector<std::int64_t>& b) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    total += std::abs(a[i] - b[i]);
  }
  return total;
}

}  // namespace

TEST_CASE("A1: subsampled count audits match the amplification formula") {
  Gate gate("A1");
  const auto start = tick();
  const auto mech_for = [](double eps) {
    return MechanismSpec::laplace(Query::count(), eps);
  };
  double worst = 0.0;
  int audits = 0;
  for (double eps : {0.1, 0.5, 1.0, 2.0}) {
    for (double rate : {0.1, 0.25, 0.5, 0.9}) {
      const SamplingDesign design = SamplingDesign::poisson({rate});
      const double formula = std::log(1.0 + rate * (std::exp(eps) - 1.0));
      for (int size : {0, 1, 2, 5, 10}) {
        const PrivacyReport rep = exact_effective_epsilon(
            design, mech_for(eps),
            add_record(identical_units(size), Record{1, 1, 1.0}));
        worst = std::max(worst, std::abs(rep.eps_effective - formula));
        ++audits;
      }
    }
  }
  const double secs = seconds_since(start);
  GATE_CHECK(gate, worst <= 1e-9);
  GATE_CHECK(gate, secs < 5.0);
  gate.append("max |audit - formula| = %.2e over %d audits, %.2fs", worst,
              audits, secs);
}

TEST_CASE("A2: cluster-gap audits climb the exact ladder toward the budget") {
  Gate gate("A2");
  const auto start = tick();
  const auto mech = MechanismSpec::laplace(Query::count(), 1.0);
  const SamplingDesign design =
      SamplingDesign::cluster(1, WithinCluster::census());
  const auto audit_gap = [&](int b) {
    return exact_effective_epsilon(
               design, mech,
               add_record(two_cluster_population(0, b), Record{1, 1, 1.0}))
        .eps_effective;
  };
  const auto ladder = [](double b) {
    return std::log((1.0 + std::exp(-b)) / (std::exp(-1.0) + std::exp(-b)));
  };

  double worst = 0.0;
  double prev = -1.0;
  bool increasing = true;
  double spot5 = 0.0;
  for (int b = 1; b <= 10; ++b) {
    const double audited = audit_gap(b);
    worst = std::max(worst, std::abs(audited - ladder(b)));
    increasing = increasing && audited > prev;
    prev = audited;
    if (b == 5) spot5 = audited;
  }
  const double at15 = audit_gap(15);
  const double secs = seconds_since(start);
  GATE_CHECK(gate, worst <= 1e-9);
  GATE_CHECK(gate, increasing);
  GATE_CHECK(gate, std::abs(spot5 - ladder(5.0)) <= 1e-6);
  GATE_CHECK(gate, std::abs(at15 - 1.0) <= 1e-3);
  GATE_CHECK(gate, secs < 2.0);
  gate.append("b=5 audits to %.17g, max |audit - ladder| = %.2e, %.2fs",
              spot5, worst, secs);
}

TEST_CASE("A3: parity allocation doubles epsilon up to the sensitivity cap") {
  Gate gate("A3");
  const auto start = tick();
  const Universe universe{{1.0}, 1, 1};
  for (double eps : {0.5, 1.0}) {
    const auto mech = MechanismSpec::laplace(Query::count(), eps);
    const ScanResult scan = worst_case_scan(
        SamplingDesign::swor(AllocationRule::parity_demo()), mech, universe,
        8);
    GATE_CHECK(gate, std::abs(scan.report.eps_effective - 2.0 * eps) <= 1e-9);
    GATE_CHECK(gate, scan.witness.base.size() % 2 == 1);
    GATE_CHECK(gate,
               scan.report.eps_effective <= degradation_eps(eps, 2) + 1e-12);
  }
  const double secs = seconds_since(start);
  GATE_CHECK(gate, secs < 10.0);
  gate.append("scans over sizes <= 8 hit 2*eps with odd witnesses, %.2fs",
              secs);
}

TEST_CASE("A4: identical clusters audit at the homogeneous closed form") {
  Gate gate("A4");
  double worst_audit = 0.0;
  double worst_identity = 0.0;
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto mech = MechanismSpec::laplace(Query::count(), eps);
    const PrivacyReport rep = exact_effective_epsilon(
        SamplingDesign::cluster(1, WithinCluster::census()), mech,
        add_record(two_cluster_population(2, 2), Record{1, 1, 1.0}));
    const double formula = std::log((1.0 + std::exp(eps)) / 2.0);
    worst_audit = std::max(worst_audit, std::abs(rep.eps_effective - formula));
    worst_identity =
        std::max(worst_identity, std::abs(poisson_amplified_eps(eps, 0.5) -
                                          homogeneous_cluster_eps(eps)));
  }
  GATE_CHECK(gate, worst_audit <= 1e-9);
  GATE_CHECK(gate, worst_identity <= 1e-12);
  gate.append("max |audit - formula| = %.2e, half-rate identity gap %.2e",
              worst_audit, worst_identity);
}

TEST_CASE("A5: seat allocations, largest remainder vs equal proportions") {
  Gate gate("A5");
  const auto start = tick();
  bool remainder_witness = false;
  std::int64_t remainder_worst = 0;
  std::int64_t equal_prop_worst = 0;
  for (std::int64_t total = 1; total <= 12; ++total) {
    const SensitivityReport remainder = global_sensitivity_scan(
        AllocationRule::proportional_hamilton(total), 3, 15);
    remainder_worst = std::max(remainder_worst, remainder.observed_gs);
    if (remainder.witness &&
        l1_between(remainder.witness->counts_before,
                   remainder.witness->counts_after) >= 2) {
      remainder_witness = true;
    }

    const SensitivityReport equal_prop = global_sensitivity_scan(
        AllocationRule::huntington_hill(total), 3, 15);
    equal_prop_worst = std::max(equal_prop_worst, equal_prop.observed_gs);
    if (equal_prop.observed_gs > 2 && equal_prop.witness) {
      const SensitivityWitness& w = *equal_prop.witness;
      std::printf(
          "[A5] violation: total=%lld sizes=(%s) add stratum %d: "
          "counts (%s) -> (%s)\n",
          static_cast<long long>(total), join64(w.sizes).c_str(), w.stratum,
          join64(w.counts_before).c_str(), join64(w.counts_after).c_str());
    }
  }
  const double secs = seconds_since(start);
  GATE_CHECK(gate, remainder_witness);
  GATE_CHECK(gate, equal_prop_worst <= 2);
  GATE_CHECK(gate, secs < 60.0);
  gate.append("largest-remainder worst L1 = %lld, equal-proportions worst "
              "L1 = %lld over totals 1..12, %.2fs",
              static_cast<long long>(remainder_worst),
              static_cast<long long>(equal_prop_worst), secs);
}

TEST_CASE("A6: per-stratum epsilons are intrinsic to the rates") {
  Gate gate("A6");
  const SamplingDesign design = SamplingDesign::poisson({0.1, 0.5});
  const auto mech = MechanismSpec::laplace(Query::count(), 1.0);
  const double formula[2] = {
      std::log(1.0 + 0.1 * (std::exp(1.0) - 1.0)),
      std::log(1.0 + 0.5 * (std::exp(1.0) - 1.0)),
  };
  double lo[2] = {1e300, 1e300};
  double hi[2] = {-1e300, -1e300};
  double worst = 0.0;
  double printed[2] = {0.0, 0.0};
  for (int b = 0; b < 10; ++b) {
    std::vector<Record> records;
    for (int i = 0; i < b; ++i) {
      records.push_back(Record{1 + (i % 2), 1, 0.25 * i});
    }
    const Population base(std::move(records), 2, 1);
    const PrivacyReport rep = stratified_audit(design, mech, base, {1.0});
    if (!rep.per_stratum || rep.per_stratum->size() != 2) {
      GATE_CHECK(gate, false);
      return;
    }
    for (int s = 0; s < 2; ++s) {
      const double v = rep.per_stratum->at(static_cast<std::size_t>(s));
      worst = std::max(worst, std::abs(v - formula[s]));
      lo[s] = std::min(lo[s], v);
      hi[s] = std::max(hi[s], v);
      printed[s] = v;
    }
  }
  GATE_CHECK(gate, worst <= 1e-6);
  GATE_CHECK(gate, hi[0] - lo[0] <= 1e-11);
  GATE_CHECK(gate, hi[1] - lo[1] <= 1e-11);
  gate.append("per-stratum (%.17g, %.17g) across 10 bases, spreads "
              "(%.1e, %.1e)",
              printed[0], printed[1], hi[0] - lo[0], hi[1] - lo[1]);
}

TEST_CASE("A7: candidate-point suprema match a dense grid oracle") {
  Gate gate("A7");
  const auto start = tick();
  SeededStream rng(20260815);
  const double scales[3] = {0.5, 1.0, 2.0};
  double worst_over = 0.0;   // candidate above the grid: fp slack only
  double worst_under = 0.0;  // grid above the candidate: must be ~0
  for (int trial = 0; trial < 100; ++trial) {
    const double scale = scales[trial % 3];
    const auto random_mixture = [&rng, scale]() {
      const int k = 1 + static_cast<int>(rng.uniform_int(8));
      std::vector<LaplaceMixture::Component> comps;
      for (int i = 0; i < k; ++i) {
        comps.push_back({6.0 * rng.uniform01() - 3.0,
                         0.05 + rng.uniform01()});
      }
      double total = 0.0;
      for (const auto& c : comps) total += c.weight;
      for (auto& c : comps) c.weight /= total;
      return LaplaceMixture::from_components(scale, std::move(comps));
    };
    const LaplaceMixture a = random_mixture();
    const LaplaceMixture b = random_mixture();
    const double exact = sup_log_ratio(a, b).eps;
    const double grid =
        oracle::sup_log_ratio_grid(oracle::from(a), oracle::from(b), 1000001);
    worst_over = std::max(worst_over, exact - grid);
    worst_under = std::max(worst_under, grid - exact);
  }
  const double secs = seconds_since(start);
  GATE_CHECK(gate, worst_over <= 1e-6);
  GATE_CHECK(gate, worst_under <= 1e-9);
  gate.append("100 mixtures: candidate - grid within [-%.1e, %.1e], %.1fs",
              worst_under, worst_over, secs);
}

TEST_CASE("A8: monte carlo lower bounds are sound and tight across seeds") {
  Gate gate("A8");
  const auto start = tick();
  const auto mech = MechanismSpec::laplace(Query::count(), 1.0);
  struct Scenario {
    const char* name;
    SamplingDesign design;
    NeighborPair pair;
  };
  const Scenario scenarios[2] = {
      {"poisson-half", SamplingDesign::poisson({0.5}),
       add_record(identical_units(0), Record{1, 1, 1.0})},
      {"cluster-gap-5", SamplingDesign::cluster(1, WithinCluster::census()),
       add_record(two_cluster_population(0, 5), Record{1, 1, 1.0})},
  };
  const SeededStream master(424242);
  for (int which = 0; which < 2; ++which) {
    const Scenario& sc = scenarios[which];
    const double exact =
        exact_effective_epsilon(sc.design, mech, sc.pair).eps_effective;
    std::vector<double> lowers;
    lowers.reserve(40);
    int sound = 0;
    for (int rep = 0; rep < 40; ++rep) {
      SeededStream stream =
          master.child(static_cast<std::uint64_t>(1000 * which + rep));
      const PrivacyReport mc = mc_effective_epsilon_lower(
          sc.design, mech, sc.pair, 1000000, 0.95, stream);
      lowers.push_back(mc.eps_effective);
      if (mc.eps_effective <= exact + 1e-9) ++sound;
    }
    std::sort(lowers.begin(), lowers.end());
    const double median = 0.5 * (lowers[19] + lowers[20]);
    GATE_CHECK(gate, sound >= 38);
    GATE_CHECK(gate, median <= exact + 1e-9);
    GATE_CHECK(gate, exact - median <= 0.12);
    gate.append("%s: %d/40 sound, exact - median = %.4f", sc.name, sound,
                exact - median);
  }
  const double secs = seconds_since(start);
  GATE_CHECK(gate, secs < 300.0);
  gate.append("%.1fs", secs);
}

TEST_CASE("A9: zero-gap trials replay the homogeneous audit exactly") {
  Gate gate("A9");
  const RandomDpResult result = random_dp_harness(64, 1.0, 1000, 31);

  // The harness formula at n=64: gap eps*sqrt(n)/4 = 2.
  const double formula = std::log((std::exp(1.0) + std::exp(-2.0)) /
                                  (1.0 + std::exp(-2.0)));
  GATE_CHECK(gate, std::abs(result.formula_eps - formula) <= 1e-12);

  // Reference audit for a realized gap of zero, built like the harness
  // builds its trials: equal cluster sums, worst added record.
  const SamplingDesign design =
      SamplingDesign::cluster(1, WithinCluster::census());
  const auto mech = MechanismSpec::laplace(Query::clamped_sum(0.0, 1.0), 1.0);
  std::vector<Record> records;
  for (int i = 0; i < 64; ++i) records.push_back(Record{1, 1, 0.0});
  for (int i = 0; i < 64; ++i) records.push_back(Record{1, 2, 0.0});
  const Population balanced(std::move(records), 1, 2);
  double zero_gap_ref = 0.0;
  for (int cluster = 1; cluster <= 2; ++cluster) {
    for (double value : {0.0, 1.0}) {
      const PrivacyReport rep = exact_effective_epsilon(
          design, mech, add_record(balanced, Record{1, cluster, value}));
      zero_gap_ref = std::max(zero_gap_ref, rep.eps_effective);
    }
  }
  GATE_CHECK(gate, std::abs(zero_gap_ref -
                            std::log((1.0 + std::exp(1.0)) / 2.0)) <= 1e-9);

  int zero_gap_trials = 0;
  double worst_zero_gap = 0.0;
  for (const RandomDpTrial& trial : result.trials) {
    if (trial.gap != 0) continue;
    ++zero_gap_trials;
    worst_zero_gap =
        std::max(worst_zero_gap, std::abs(trial.exact_eps - zero_gap_ref));
  }
  GATE_CHECK(gate, zero_gap_trials > 0);
  GATE_CHECK(gate, worst_zero_gap <= 1e-12);

  // The closed form is an approximation; the empirical median is recorded
  // for calibration, not asserted.
  gate.append("%d zero-gap trials replay %.17g (max dev %.1e)",
              zero_gap_trials, zero_gap_ref, worst_zero_gap);
  gate.append("calibration: median exact = %.6f vs formula %.6f "
              "(delta %+.4f, not asserted)",
              result.median_exact, result.formula_eps,
              result.median_exact - result.formula_eps);
}

TEST_CASE("A10: stability sweep rows replay under independent enumeration") {
  Gate gate("A10");
  const auto start = tick();
  const std::vector<double> eps_grid = {0.25, 0.5, 1.0};
  const std::vector<double> rate_grid = {0.25, 0.5, 0.75};
  const std::vector<std::int64_t> size_grid = {2, 3, 4, 5, 6};
  const std::vector<ConjectureRow> rows =
      conjecture_harness(eps_grid, rate_grid, size_grid);
  GATE_CHECK(gate, rows.size() == 45);

  // Independent model of one cell: the sampled count is the rounded quota
  // (floor with probability 1-frac, else floor+1, snapped at 1e-12), and
  // the count query sees nothing else, so the output law is a two-point
  // Laplace mixture evaluated by the grid oracle.
  const auto two_point = [](double rate, std::int64_t n) {
    std::vector<std::pair<long double, long double>> comps;
    const double target = rate * static_cast<double>(n);
    const double lo = std::floor(target);
    const double frac = target - lo;
    if (frac < 1e-12) {
      comps.push_back({lo, 1.0L});
    } else if (frac > 1.0 - 1e-12) {
      comps.push_back({lo + 1.0, 1.0L});
    } else {
      comps.push_back({lo, 1.0L - static_cast<long double>(frac)});
      comps.push_back({lo + 1.0, static_cast<long double>(frac)});
    }
    return comps;
  };

  double worst = 0.0;
  double worst_fit = 0.0;
  bool grid_matches = true;
  std::size_t idx = 0;
  for (double eps : eps_grid) {
    for (double rate : rate_grid) {
      for (std::int64_t size : size_grid) {
        const ConjectureRow& row = rows[idx++];
        grid_matches = grid_matches && row.eps == eps && row.rate == rate &&
                       row.stratum_size == size;
        const oracle::Mixture base{1.0L / eps, two_point(rate, size)};
        const oracle::Mixture ext{1.0L / eps, two_point(rate, size + 1)};
        const double add = oracle::sup_log_ratio_grid(ext, base, 1000001);
        const double remove = oracle::sup_log_ratio_grid(base, ext, 1000001);
        worst = std::max(
            worst, std::abs(row.exact_eps - std::max(add, remove)));
        const double fit = std::expm1(row.exact_eps) / (eps * rate);
        worst_fit =
            std::max(worst_fit, std::abs(row.fitted_constant - fit));
      }
    }
  }
  const double secs = seconds_since(start);
  GATE_CHECK(gate, grid_matches);
  GATE_CHECK(gate, worst <= 1e-6);
  GATE_CHECK(gate, worst_fit <= 1e-12);
  gate.append("45 rows, max |exact - oracle| = %.1e, %.1fs", worst, secs);
}
