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

#include "surveydp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "surveydp/auditor.hpp"
#include "surveydp/config.hpp"
#include "surveydp/errors.hpp"
#include "surveydp/report.hpp"

namespace surveydp {

namespace {

// Output/reproducibility flags shared by all subcommands.
struct CommonOpts {
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::uint64_t budget = 0;
  bool budget_given = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts* opts, bool with_seed = true) {
  cmd->add_option("--out", opts->out_path,
                  "write the machine report to this path");
  cmd->add_option("--format", opts->format, "machine report format")
      ->check(CLI::IsMember({"csv", "json"}));
  if (with_seed) {
    cmd->add_option("--seed", opts->seed, "random seed")
        ->each([opts](const std::string&) { opts->seed_given = true; });
  }
  cmd->add_option("--budget", opts->budget, "enumeration budget")
      ->each([opts](const std::string&) { opts->budget_given = true; });
}

std::uint64_t resolve_budget(const CommonOpts& opts) {
  if (opts.budget_given) return opts.budget;
  if (const char* env = std::getenv("SURVEYDP_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ConfigError("SURVEYDP_BUDGET must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
  }
  return kDefaultBudget;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output file: " + path);
  out << content;
  if (!out.good()) throw Error("failed writing output file: " + path);
}

void emit_machine(const CommonOpts& opts, const std::string& csv,
                  const std::string& json) {
  if (opts.out_path.empty()) return;
  write_file(opts.out_path, opts.format == "json" ? json : csv);
}

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7g", v);
  return buf;
}

void print_report(std::ostream& out, const std::string& scenario,
                  const std::string& design, const MechanismSpec& mech,
                  const PrivacyReport& report) {
  out << "scenario: " << scenario << "\n";
  out << "design: " << design << "\n";
  out << "mechanism: " << mech.query.describe()
      << ", eps=" << brief(mech.epsilon) << "\n";
  out << "eps_add = " << format_double(report.eps_add) << "\n";
  out << "eps_remove = " << format_double(report.eps_remove) << "\n";
  out << "eps_effective = " << format_double(report.eps_effective)
      << " (method=" << method_name(report.method) << ")\n";
  out << "witness output = " << format_double(report.witness_output) << "\n";
  if (report.per_stratum) {
    out << "per-stratum:";
    for (double e : *report.per_stratum) out << " " << format_double(e);
    out << "\n";
  }
  if (report.truncated_allocation) {
    out << "warning: an allocation exceeded a stratum size and was"
        << " truncated\n";
  }
}

// ---------------------------------------------------------------- audit --

struct AuditOpts {
  std::string config_path;
  CommonOpts common;
};

void run_audit(const AuditOpts& opts, std::ostream& out) {
  const DesignConfig config = load_design_config(opts.config_path);
  const std::uint64_t budget = resolve_budget(opts.common);
  std::uint64_t seed = 1;
  if (config.audit.seed) seed = *config.audit.seed;
  if (opts.common.seed_given) seed = opts.common.seed;

  PrivacyReport report;
  std::string witness_note;
  switch (config.audit.mode) {
    case AuditSettings::Mode::kExact: {
      const NeighborPair pair =
          add_record(config.population, config.audit.added);
      report = exact_effective_epsilon(config.design, config.mechanism, pair,
                                       budget);
      break;
    }
    case AuditSettings::Mode::kMonteCarlo: {
      const NeighborPair pair =
          add_record(config.population, config.audit.added);
      SeededStream rng(seed);
      report = mc_effective_epsilon_lower(config.design, config.mechanism,
                                          pair, config.audit.n_samples,
                                          config.audit.confidence, rng);
      break;
    }
    case AuditSettings::Mode::kScan: {
      Universe universe;
      universe.values = config.audit.universe_values;
      universe.num_strata = config.audit.universe_strata;
      universe.num_clusters = config.audit.universe_clusters;
      const ScanResult scan = worst_case_scan(
          config.design, config.mechanism, universe, config.audit.max_size,
          budget);
      report = scan.report;
      std::ostringstream note;
      note << "worst pair: |base|=" << scan.witness.base.size()
           << ", added (stratum=" << scan.witness.added.stratum
           << ", cluster=" << scan.witness.added.cluster
           << ", value=" << brief(scan.witness.added.value) << "), "
           << scan.pairs_audited << " pairs audited";
      witness_note = note.str();
      break;
    }
  }

  print_report(out, config.name, config.design.describe(), config.mechanism,
               report);
  if (!witness_note.empty()) out << witness_note << "\n";

  const std::vector<ReportRow> rows = {report_row(
      config.name, config.mechanism.epsilon, config.design.describe(),
      report)};
  emit_machine(opts.common, rows_to_csv(rows), rows_to_json(rows));
}

// --------------------------------------------------------------- bounds --

struct BoundsOpts {
  std::string calculator;
  std::vector<double> eps;
  std::vector<double> rate;
  std::vector<double> per_stratum;
  std::vector<std::int64_t> gs;
  std::vector<std::int64_t> b;
  std::vector<std::int64_t> n;
  int s = 1;
  int s2 = 1;
  CommonOpts common;
};

void require_values(const std::vector<double>& v, const char* flag) {
  if (v.empty()) throw ConfigError(std::string("missing ") + flag);
}

void require_values(const std::vector<std::int64_t>& v, const char* flag) {
  if (v.empty()) throw ConfigError(std::string("missing ") + flag);
}

void run_bounds(const BoundsOpts& opts, std::ostream& out) {
  std::vector<ReportRow> rows;
  const auto add_row = [&rows](const std::string& scenario, double eps_base,
                               const std::string& params, double value) {
    ReportRow row;
    row.scenario = scenario;
    row.eps_base = eps_base;
    row.design = params;
    row.eps_add = value;
    row.eps_remove = value;
    row.eps_effective = value;
    row.witness = std::numeric_limits<double>::quiet_NaN();
    row.method = method_name(AuditMethod::kClosedForm);
    rows.push_back(row);
  };

  const std::string& calc = opts.calculator;
  if (calc == "poisson") {
    require_values(opts.eps, "--eps");
    require_values(opts.rate, "--rate");
    for (double e : opts.eps) {
      for (double r : opts.rate) {
        add_row("poisson", e, "r=" + brief(r), poisson_amplified_eps(e, r));
      }
    }
  } else if (calc == "stratified-poisson") {
    require_values(opts.eps, "--eps");
    require_values(opts.rate, "--rate");
    for (double e : opts.eps) {
      const StratifiedEpsilon se = stratified_poisson_eps(e, opts.rate);
      for (std::size_t i = 0; i < se.size(); ++i) {
        add_row("stratified-poisson[s=" + std::to_string(i + 1) + "]", e,
                "r=" + brief(opts.rate[i]), se[i]);
      }
    }
  } else if (calc == "value-change") {
    require_values(opts.per_stratum, "--per-stratum");
    add_row("value-change", 0.0,
            "s=" + std::to_string(opts.s) + ",s2=" + std::to_string(opts.s2),
            value_change_eps(opts.per_stratum, opts.s, opts.s2));
  } else if (calc == "degradation") {
    require_values(opts.eps, "--eps");
    require_values(opts.gs, "--gs");
    for (double e : opts.eps) {
      for (std::int64_t g : opts.gs) {
        add_row("degradation", e, "gs=" + std::to_string(g),
                degradation_eps(e, g));
      }
    }
  } else if (calc == "cluster-worst") {
    require_values(opts.eps, "--eps");
    require_values(opts.b, "--b");
    for (double e : opts.eps) {
      for (std::int64_t gap : opts.b) {
        add_row("cluster-worst", e, "b=" + std::to_string(gap),
                cluster_worst_eps(e, gap));
      }
    }
  } else if (calc == "homogeneous") {
    require_values(opts.eps, "--eps");
    for (double e : opts.eps) {
      add_row("homogeneous", e, "", homogeneous_cluster_eps(e));
    }
  } else if (calc == "random-dp") {
    require_values(opts.eps, "--eps");
    require_values(opts.n, "--n");
    for (double e : opts.eps) {
      for (std::int64_t size : opts.n) {
        add_row("random-dp", e, "n=" + std::to_string(size),
                random_dp_cluster_eps(e, size));
      }
    }
  } else if (calc == "small-eps") {
    require_values(opts.eps, "--eps");
    require_values(opts.rate, "--rate");
    for (double e : opts.eps) {
      for (double r : opts.rate) {
        add_row("small-eps", e, "r=" + brief(r), small_eps_approx(e, r));
      }
    }
  } else {
    throw ConfigError("unknown bounds calculator '" + calc + "'");
  }

  for (const ReportRow& row : rows) {
    out << row.scenario << (row.design.empty() ? "" : " " + row.design)
        << " eps=" << brief(row.eps_base) << " -> " << brief(row.eps_effective)
        << "\n";
  }
  emit_machine(opts.common, rows_to_csv(rows), rows_to_json(rows));
}

// ----------------------------------------------------------- alloc-scan --

struct AllocScanOpts {
  std::string rule;
  int num_strata = 1;
  std::int64_t max_size = 8;
  std::int64_t total = 0;
  std::vector<std::int64_t> counts;
  std::vector<double> rates;
  CommonOpts common;
};

AllocationRule rule_from_opts(const AllocScanOpts& opts) {
  if (opts.rule == "fixed") return AllocationRule::fixed(opts.counts);
  if (opts.rule == "parity_demo") return AllocationRule::parity_demo();
  if (opts.rule == "proportional_floor") {
    return AllocationRule::proportional_floor(opts.total);
  }
  if (opts.rule == "proportional_hamilton") {
    return AllocationRule::proportional_hamilton(opts.total);
  }
  if (opts.rule == "huntington_hill") {
    return AllocationRule::huntington_hill(opts.total);
  }
  if (opts.rule == "randomized_rounding") {
    return AllocationRule::randomized_rounding(opts.rates);
  }
  throw ConfigError("unknown allocation rule '" + opts.rule + "'");
}

std::string join_sizes(const std::vector<std::int64_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(sizes[i]);
  }
  return out;
}

void run_alloc_scan(const AllocScanOpts& opts, std::ostream& out) {
  const AllocationRule rule = rule_from_opts(opts);
  const std::uint64_t budget = resolve_budget(opts.common);

  struct Cell {
    std::vector<std::int64_t> sizes;
    int stratum;
    std::int64_t l1;
  };
  std::vector<Cell> cells;
  const SensitivityReport report = global_sensitivity_scan(
      rule, opts.num_strata, opts.max_size, budget,
      [&cells](const std::vector<std::int64_t>& sizes, int stratum,
               std::int64_t l1) {
        cells.push_back({sizes, stratum, l1});
      });

  out << "rule: " << report.rule << "\n";
  out << "strata: " << report.num_strata
      << ", max stratum size: " << report.max_stratum_size << "\n";
  out << "observed_gs = " << report.observed_gs << "\n";
  out << "cells scanned: " << report.scanned_cells
      << ", infeasible skipped: " << report.skipped_infeasible << "\n";
  if (report.witness) {
    out << "witness: sizes=(" << join_sizes(report.witness->sizes)
        << "), add stratum " << report.witness->stratum;
    if (!report.witness->counts_before.empty()) {
      out << ", counts (" << join_sizes(report.witness->counts_before)
          << ") -> (" << join_sizes(report.witness->counts_after) << ")";
    }
    out << "\n";
  }

  std::string csv = "sizes,stratum,l1_change\n";
  for (const Cell& cell : cells) {
    csv += join_sizes(cell.sizes);
    csv += ',';
    csv += std::to_string(cell.stratum);
    csv += ',';
    csv += std::to_string(cell.l1);
    csv += '\n';
  }

  nlohmann::json json;
  json["rule"] = report.rule;
  json["observed_gs"] = report.observed_gs;
  json["scanned_cells"] = report.scanned_cells;
  json["skipped_infeasible"] = report.skipped_infeasible;
  if (report.witness) {
    json["witness"] = {{"sizes", report.witness->sizes},
                       {"stratum", report.witness->stratum},
                       {"counts_before", report.witness->counts_before},
                       {"counts_after", report.witness->counts_after}};
  }
  nlohmann::json cell_array = nlohmann::json::array();
  for (const Cell& cell : cells) {
    cell_array.push_back(
        {{"sizes", cell.sizes}, {"stratum", cell.stratum}, {"l1", cell.l1}});
  }
  json["cells"] = std::move(cell_array);

  emit_machine(opts.common, csv, json.dump(2) + "\n");
}

// ----------------------------------------------------------- conjecture --

struct ConjectureOpts {
  std::vector<double> eps = {0.25, 0.5, 1.0};
  std::vector<double> rates = {0.25, 0.5, 0.75};
  std::vector<std::int64_t> sizes = {2, 3, 4, 5, 6};
  CommonOpts common;
};

void run_conjecture(const ConjectureOpts& opts, std::ostream& out) {
  const std::uint64_t budget = resolve_budget(opts.common);
  const std::vector<ConjectureRow> rows =
      conjecture_harness(opts.eps, opts.rates, opts.sizes, budget);

  out << "eps,rate,stratum_size,exact_eps,fitted_constant\n";
  std::string csv = "eps,rate,stratum_size,exact_eps,fitted_constant\n";
  nlohmann::json arr = nlohmann::json::array();
  for (const ConjectureRow& row : rows) {
    const std::string fitted = std::isnan(row.fitted_constant)
                                   ? ""
                                   : format_double(row.fitted_constant);
    std::string line = format_double(row.eps) + "," +
                       format_double(row.rate) + "," +
                       std::to_string(row.stratum_size) + "," +
                       format_double(row.exact_eps) + "," + fitted + "\n";
    out << brief(row.eps) << "," << brief(row.rate) << ","
        << row.stratum_size << "," << brief(row.exact_eps) << ","
        << (fitted.empty() ? "" : brief(row.fitted_constant)) << "\n";
    csv += line;
    nlohmann::json obj;
    obj["eps"] = row.eps;
    obj["rate"] = row.rate;
    obj["stratum_size"] = row.stratum_size;
    obj["exact_eps"] = row.exact_eps;
    if (std::isnan(row.fitted_constant)) {
      obj["fitted_constant"] = nullptr;
    } else {
      obj["fitted_constant"] = row.fitted_constant;
    }
    arr.push_back(obj);
  }
  emit_machine(opts.common, csv, arr.dump(2) + "\n");
}

// ------------------------------------------------------------ random-dp --

struct RandomDpOpts {
  int n = 64;
  double eps = 1.0;
  int trials = 1000;
  CommonOpts common;
};

void run_random_dp(const RandomDpOpts& opts, std::ostream& out) {
  const RandomDpResult result =
      random_dp_harness(opts.n, opts.eps, opts.trials, opts.common.seed);

  out << "n=" << opts.n << " eps=" << brief(opts.eps)
      << " trials=" << opts.trials << "\n";
  out << "formula eps = " << format_double(result.formula_eps) << "\n";
  out << "exact eps quantiles: q10=" << format_double(result.q10_exact)
      << " median=" << format_double(result.median_exact)
      << " q90=" << format_double(result.q90_exact) << "\n";

  std::string csv = "trial,gap,exact_eps,formula_eps\n";
  nlohmann::json json;
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    const RandomDpTrial& trial = result.trials[i];
    csv += std::to_string(i) + "," + std::to_string(trial.gap) + "," +
           format_double(trial.exact_eps) + "," +
           format_double(result.formula_eps) + "\n";
    arr.push_back({{"trial", i},
                   {"gap", trial.gap},
                   {"exact_eps", trial.exact_eps}});
  }
  json["trials"] = std::move(arr);
  json["formula_eps"] = result.formula_eps;
  json["median_exact"] = result.median_exact;
  json["q10_exact"] = result.q10_exact;
  json["q90_exact"] = result.q90_exact;
  emit_machine(opts.common, csv, json.dump(2) + "\n");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"survey-sampling differential privacy auditor"};
  app.require_subcommand(1);

  AuditOpts audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "audit a scenario config");
  audit_cmd->add_option("--config", audit.config_path, "scenario file")
      ->required();
  add_common_flags(audit_cmd, &audit.common);

  BoundsOpts bounds;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "evaluate closed-form privacy bounds");
  bounds_cmd
      ->add_option("calculator", bounds.calculator,
                   "poisson | stratified-poisson | value-change | "
                   "degradation | cluster-worst | homogeneous | random-dp | "
                   "small-eps")
      ->required();
  bounds_cmd->add_option("--eps", bounds.eps)->delimiter(',');
  bounds_cmd->add_option("--rate", bounds.rate)->delimiter(',');
  bounds_cmd->add_option("--per-stratum", bounds.per_stratum)->delimiter(',');
  bounds_cmd->add_option("--gs", bounds.gs)->delimiter(',');
  bounds_cmd->add_option("--b", bounds.b)->delimiter(',');
  bounds_cmd->add_option("--n", bounds.n)->delimiter(',');
  bounds_cmd->add_option("--s", bounds.s);
  bounds_cmd->add_option("--s2", bounds.s2);
  add_common_flags(bounds_cmd, &bounds.common, /*with_seed=*/false);

  AllocScanOpts alloc_scan;
  CLI::App* alloc_cmd = app.add_subcommand(
      "alloc-scan", "measure allocation-rule global sensitivity");
  alloc_cmd->add_option("--rule", alloc_scan.rule, "allocation rule")
      ->required();
  alloc_cmd->add_option("--k", alloc_scan.num_strata, "number of strata")
      ->required();
  alloc_cmd
      ->add_option("--max-size", alloc_scan.max_size,
                   "largest stratum size scanned")
      ->required();
  alloc_cmd->add_option("--total", alloc_scan.total, "allocation total");
  alloc_cmd->add_option("--counts", alloc_scan.counts)->delimiter(',');
  alloc_cmd->add_option("--rates", alloc_scan.rates)->delimiter(',');
  add_common_flags(alloc_cmd, &alloc_scan.common, /*with_seed=*/false);

  ConjectureOpts conjecture;
  CLI::App* conjecture_cmd = app.add_subcommand(
      "conjecture", "exact stability sweep for randomized rounding");
  conjecture_cmd->add_option("--eps", conjecture.eps)->delimiter(',');
  conjecture_cmd->add_option("--rates", conjecture.rates)->delimiter(',');
  conjecture_cmd->add_option("--sizes", conjecture.sizes)->delimiter(',');
  add_common_flags(conjecture_cmd, &conjecture.common, /*with_seed=*/false);

  RandomDpOpts random_dp;
  CLI::App* random_dp_cmd = app.add_subcommand(
      "random-dp", "per-trial exact audits of the two-cluster design");
  random_dp_cmd->add_option("--n", random_dp.n, "records per cluster");
  random_dp_cmd->add_option("--eps", random_dp.eps, "mechanism epsilon");
  random_dp_cmd->add_option("--trials", random_dp.trials);
  add_common_flags(random_dp_cmd, &random_dp.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    // Help/version requests exit cleanly; anything else is a usage error.
    return code == 0 ? 0 : 2;
  }

  try {
    if (audit_cmd->parsed()) {
      run_audit(audit, out);
    } else if (bounds_cmd->parsed()) {
      run_bounds(bounds, out);
    } else if (alloc_cmd->parsed()) {
      run_alloc_scan(alloc_scan, out);
    } else if (conjecture_cmd->parsed()) {
      run_conjecture(conjecture, out);
    } else if (random_dp_cmd->parsed()) {
      run_random_dp(random_dp, out);
    }
    return 0;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("surveydp");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace surveydp
