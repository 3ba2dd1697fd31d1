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

#include "surveydp/auditor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surveydp/errors.hpp"
#include "surveydp/stats.hpp"

namespace surveydp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(sum_i w_i e^(sign * c_i / s)) via log-sum-exp.
double log_tail_mass(const LaplaceMixture& mix, double sign) {
  double max_term = -kInf;
  for (const auto& c : mix.components()) {
    max_term = std::max(max_term,
                        std::log(c.weight) + sign * c.center / mix.scale());
  }
  double sum = 0.0;
  for (const auto& c : mix.components()) {
    sum += std::exp(std::log(c.weight) + sign * c.center / mix.scale() -
                    max_term);
  }
  return max_term + std::log(sum);
}

}  // namespace

SupLogRatio sup_log_ratio(const LaplaceMixture& a, const LaplaceMixture& b) {
  if (std::abs(a.scale() - b.scale()) >
      1e-12 * std::max(a.scale(), b.scale())) {
    throw Error("sup_log_ratio needs equal scales");
  }
  const auto ratio = [&a, &b](double x) {
    return a.log_density(x) - b.log_density(x);
  };

  SupLogRatio best;
  best.eps = -kInf;
  const auto consider = [&best](double eps, double witness) {
    if (eps > best.eps) {
      best.eps = eps;
      best.witness = witness;
    }
  };

  // Component centers: every kink of the piecewise-smooth log-ratio.
  std::vector<double> centers;
  for (const auto& c : a.components()) centers.push_back(c.center);
  for (const auto& c : b.components()) centers.push_back(c.center);
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  for (double c : centers) consider(ratio(c), c);

  // Beyond the extreme centers both densities decay at the same rate, so
  // the ratio is constant there: the analytic tail limits.
  consider(log_tail_mass(a, 1.0) - log_tail_mass(b, 1.0), kInf);
  consider(log_tail_mass(a, -1.0) - log_tail_mass(b, -1.0), -kInf);

  // Between adjacent centers the ratio is a Moebius function of e^(2x/s):
  // at most one interior extremum, which golden-section pins down.
  constexpr double kGolden = 0.6180339887498949;
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
    double lo = centers[i];
    double hi = centers[i + 1];
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = ratio(x1);
    double f2 = ratio(x2);
    for (int iter = 0; iter < 120 && hi - lo > 1e-14 * (1.0 + std::abs(lo));
         ++iter) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = ratio(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = ratio(x1);
      }
    }
    consider(f1, x1);
    consider(f2, x2);
  }
  return best;
}

PrivacyReport exact_effective_epsilon(const SamplingDesign& d,
                                      const MechanismSpec& m,
                                      const NeighborPair& pair,
                                      std::uint64_t budget) {
  const OutcomeDistribution base_outcomes =
      enumerate_outcomes(d, pair.base, budget);
  const OutcomeDistribution ext_outcomes =
      enumerate_outcomes(d, pair.extended, budget);
  const LaplaceMixture base_mix =
      mixture_from_outcomes(base_outcomes, m.query, m);
  const LaplaceMixture ext_mix =
      mixture_from_outcomes(ext_outcomes, m.query, m);

  const SupLogRatio add = sup_log_ratio(ext_mix, base_mix);
  const SupLogRatio remove = sup_log_ratio(base_mix, ext_mix);

  PrivacyReport report;
  report.eps_add = add.eps;
  report.eps_remove = remove.eps;
  report.eps_effective = std::max(add.eps, remove.eps);
  report.witness_output = add.eps >= remove.eps ? add.witness : remove.witness;
  report.method = AuditMethod::kExact;
  report.truncated_allocation =
      base_outcomes.truncated_allocation || ext_outcomes.truncated_allocation;
  return report;
}

PrivacyReport stratified_audit(const SamplingDesign& d,
                               const MechanismSpec& m, const Population& p,
                               const std::vector<double>& values,
                               std::uint64_t budget) {
  if (values.empty()) {
    throw Error("stratified audit needs at least one candidate value");
  }
  int num_strata = std::max(p.num_strata(), 1);
  if (d.kind == SamplingDesign::Kind::kPoisson) {
    num_strata = std::max(num_strata, static_cast<int>(d.rates.size()));
  }
  const int num_clusters = std::max(p.num_clusters(), 1);

  PrivacyReport best;
  best.method = AuditMethod::kExact;
  best.eps_effective = -kInf;
  bool any_truncated = false;
  StratifiedEpsilon per_stratum(static_cast<std::size_t>(num_strata), 0.0);
  for (int s = 1; s <= num_strata; ++s) {
    for (int c = 1; c <= num_clusters; ++c) {
      for (double x : values) {
        const PrivacyReport rep = exact_effective_epsilon(
            d, m, add_record(p, Record{s, c, x}), budget);
        auto& level = per_stratum[static_cast<std::size_t>(s - 1)];
        level = std::max(level, rep.eps_effective);
        if (rep.eps_effective > best.eps_effective) best = rep;
        any_truncated |= rep.truncated_allocation;
      }
    }
  }
  best.per_stratum = std::move(per_stratum);
  best.truncated_allocation = any_truncated;
  return best;
}

ScanResult worst_case_scan(const SamplingDesign& d, const MechanismSpec& m,
                           const Universe& universe, int max_size,
                           std::uint64_t budget) {
  ScanResult result;
  result.report.method = AuditMethod::kExact;
  result.report.eps_effective = -kInf;
  const std::vector<Record> types = universe.record_types();
  for_each_population(
      universe, max_size, budget, [&](const Population& base) {
        for (const Record& r : types) {
          const NeighborPair pair = add_record(base, r);
          const PrivacyReport rep =
              exact_effective_epsilon(d, m, pair, budget);
          result.pairs_audited += 1;
          result.report.truncated_allocation |= rep.truncated_allocation;
          if (rep.eps_effective > result.report.eps_effective) {
            const bool truncated_any = result.report.truncated_allocation;
            result.report = rep;
            result.report.truncated_allocation = truncated_any;
            result.witness = pair;
          }
        }
      });
  return result;
}

namespace {

struct ArmSamples {
  std::vector<double> outputs;
  std::vector<double> centers;  // noiseless query values, one per output
};

ArmSamples sample_arm(const SamplingDesign& d, const MechanismSpec& m,
                      const Population& p, std::int64_t n_samples,
                      SeededStream stream) {
  ArmSamples arm;
  arm.outputs.reserve(static_cast<std::size_t>(n_samples));
  arm.centers.reserve(static_cast<std::size_t>(n_samples));
  const double scale = m.scale();
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Population subset = draw(d, p, stream);
    const double center = query_value(m.query, subset);
    arm.centers.push_back(center);
    arm.outputs.push_back(center + stream.laplace(scale));
  }
  return arm;
}

std::vector<double> distinct_centers(const ArmSamples& base,
                                     const ArmSamples& ext) {
  std::vector<double> all;
  all.reserve(base.centers.size() + ext.centers.size());
  all.insert(all.end(), base.centers.begin(), base.centers.end());
  all.insert(all.end(), ext.centers.begin(), ext.centers.end());
  std::sort(all.begin(), all.end());
  std::vector<double> distinct;
  for (double c : all) {
    if (distinct.empty() || c - distinct.back() > 1e-9) distinct.push_back(c);
  }
  // Keep the candidate set small so the Bonferroni split stays mild; an
  // even slice preserves the extremes, where tail ratios live.
  constexpr std::size_t kMaxThresholds = 64;
  if (distinct.size() > kMaxThresholds) {
    std::vector<double> sliced;
    sliced.reserve(kMaxThresholds);
    for (std::size_t i = 0; i < kMaxThresholds; ++i) {
      const std::size_t j =
          i * (distinct.size() - 1) / (kMaxThresholds - 1);
      sliced.push_back(distinct[j]);
    }
    sliced.erase(std::unique(sliced.begin(), sliced.end()), sliced.end());
    distinct = std::move(sliced);
  }
  return distinct;
}

std::int64_t count_at_most(const std::vector<double>& sorted, double t) {
  return static_cast<std::int64_t>(
      std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

}  // namespace

PrivacyReport mc_effective_epsilon_lower(const SamplingDesign& d,
                                         const MechanismSpec& m,
                                         const NeighborPair& pair,
                                         std::int64_t n_samples,
                                         double confidence,
                                         SeededStream& rng) {
  if (n_samples < 1000) {
    throw Error("monte carlo audit needs n_samples >= 1000");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error("confidence must lie in (0, 1)");
  }
  ArmSamples base = sample_arm(d, m, pair.base, n_samples, rng.child(0));
  ArmSamples ext = sample_arm(d, m, pair.extended, n_samples, rng.child(1));
  const std::vector<double> thresholds = distinct_centers(base, ext);
  std::sort(base.outputs.begin(), base.outputs.end());
  std::sort(ext.outputs.begin(), ext.outputs.end());

  // Candidates: {a <= t} and {a > t} per threshold, each in both
  // directions. Every candidate spends two binomial bounds at
  // alpha/(2K), so the final max is a valid (1-alpha) lower bound.
  const double alpha = 1.0 - confidence;
  const std::uint64_t num_candidates =
      4 * static_cast<std::uint64_t>(thresholds.size());
  const double alpha_each =
      alpha / (2.0 * static_cast<double>(num_candidates));

  PrivacyReport report;
  report.method = AuditMethod::kMonteCarlo;
  report.eps_add = 0.0;
  report.eps_remove = 0.0;
  report.witness_output = thresholds.empty() ? 0.0 : thresholds.front();
  double best = 0.0;
  for (double t : thresholds) {
    const std::int64_t base_le = count_at_most(base.outputs, t);
    const std::int64_t ext_le = count_at_most(ext.outputs, t);
    const std::int64_t events[2][2] = {
        {base_le, ext_le},
        {n_samples - base_le, n_samples - ext_le},
    };
    for (const auto& counts : events) {
      const std::int64_t in_base = counts[0];
      const std::int64_t in_ext = counts[1];
      // Add direction: ln P_ext(E) - ln P_base(E) from below.
      if (in_ext > 0 && in_base < n_samples) {
        const double lo = clopper_pearson_lower(in_ext, n_samples, alpha_each);
        const double up = clopper_pearson_upper(in_base, n_samples,
                                                alpha_each);
        const double cand = std::log(lo) - std::log(up);
        if (cand > report.eps_add) report.eps_add = cand;
        if (cand > best) {
          best = cand;
          report.witness_output = t;
        }
      }
      // Remove direction: ln P_base(E) - ln P_ext(E) from below.
      if (in_base > 0 && in_ext < n_samples) {
        const double lo = clopper_pearson_lower(in_base, n_samples,
                                                alpha_each);
        const double up = clopper_pearson_upper(in_ext, n_samples,
                                                alpha_each);
        const double cand = std::log(lo) - std::log(up);
        if (cand > report.eps_remove) report.eps_remove = cand;
        if (cand > best) {
          best = cand;
          report.witness_output = t;
        }
      }
    }
  }
  report.eps_effective = std::max(report.eps_add, report.eps_remove);
  return report;
}

std::vector<ConjectureRow> conjecture_harness(
    const std::vector<double>& eps_grid, const std::vector<double>& rate_grid,
    const std::vector<std::int64_t>& size_grid, std::uint64_t budget) {
  std::vector<ConjectureRow> rows;
  rows.reserve(eps_grid.size() * rate_grid.size() * size_grid.size());
  for (double eps : eps_grid) {
    for (double rate : rate_grid) {
      for (std::int64_t size : size_grid) {
        if (size < 0) throw Error("stratum size must be non-negative");
        std::vector<Record> records(
            static_cast<std::size_t>(size), Record{1, 1, 0.0});
        const Population pop(std::move(records), 1, 1);
        const SamplingDesign design =
            SamplingDesign::swor(AllocationRule::randomized_rounding({rate}));
        const MechanismSpec mech = MechanismSpec::laplace(Query::count(), eps);
        const PrivacyReport rep =
            stratified_audit(design, mech, pop, {0.0}, budget);
        ConjectureRow row;
        row.eps = eps;
        row.rate = rate;
        row.stratum_size = size;
        row.exact_eps = rep.per_stratum.value().at(0);
        row.fitted_constant =
            rate > 0.0 ? std::expm1(row.exact_eps) / (eps * rate)
                       : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

RandomDpResult random_dp_harness(int n, double eps, int trials,
                                 std::uint64_t seed) {
  if (n < 0 || n > 64) {
    throw Error("cluster size must lie in [0, 64] for exact per-trial audits");
  }
  if (trials < 1) throw Error("need at least one trial");

  const SamplingDesign design =
      SamplingDesign::cluster(1, WithinCluster::census());
  const MechanismSpec mech =
      MechanismSpec::laplace(Query::clamped_sum(0.0, 1.0), eps);
  const SeededStream master(seed);

  RandomDpResult result;
  result.trials.reserve(static_cast<std::size_t>(trials));
  result.formula_eps = random_dp_cluster_eps(eps, n);
  for (int t = 0; t < trials; ++t) {
    SeededStream stream = master.child(static_cast<std::uint64_t>(t));
    std::vector<Record> records;
    records.reserve(static_cast<std::size_t>(2 * n));
    std::int64_t sums[2] = {0, 0};
    for (int cluster = 1; cluster <= 2; ++cluster) {
      for (int i = 0; i < n; ++i) {
        const bool one = stream.bernoulli(0.5);
        sums[cluster - 1] += one ? 1 : 0;
        records.push_back(Record{1, cluster, one ? 1.0 : 0.0});
      }
    }
    const Population pop(std::move(records), 1, 2);
    RandomDpTrial trial;
    trial.gap = std::abs(sums[0] - sums[1]);
    trial.exact_eps = 0.0;
    for (int cluster = 1; cluster <= 2; ++cluster) {
      for (double value : {0.0, 1.0}) {
        const PrivacyReport rep = exact_effective_epsilon(
            design, mech, add_record(pop, Record{1, cluster, value}));
        trial.exact_eps = std::max(trial.exact_eps, rep.eps_effective);
      }
    }
    result.trials.push_back(trial);
  }

  std::vector<double> sorted;
  sorted.reserve(result.trials.size());
  for (const RandomDpTrial& t : result.trials) sorted.push_back(t.exact_eps);
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&sorted](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  result.median_exact = quantile(0.5);
  result.q10_exact = quantile(0.1);
  result.q90_exact = quantile(0.9);
  return result;
}

}  // namespace surveydp
