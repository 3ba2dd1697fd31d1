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

#ifndef SURVEYDP_CONFIG_HPP_
#define SURVEYDP_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surveydp/mechanisms.hpp"
#include "surveydp/population.hpp"
#include "surveydp/samplers.hpp"

namespace surveydp {

// Minimal structured-text scenario format: `key = value` lines grouped
// under `[section]` headers, `#` comments. Values are numbers, booleans,
// quoted strings, or arrays of numbers. Just enough TOML for flat scenario
// files; nothing nested.
class ConfigTable {
 public:
  struct Value {
    enum class Kind { kNumber, kString, kBool, kNumberList };
    Kind kind = Kind::kNumber;
    double number = 0.0;
    std::string string;
    bool boolean = false;
    std::vector<double> list;
  };

  // Throws ParseError with the 1-based line of the first malformed entry.
  static ConfigTable parse(std::string_view text);

  bool has(const std::string& section, const std::string& key) const;

  // Typed getters; throw ConfigError naming `section.key` when the key is
  // missing or has the wrong type.
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key,
                   double fallback) const;
  std::int64_t integer(const std::string& section,
                       const std::string& key) const;
  std::int64_t integer_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text_or(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  std::vector<double> numbers(const std::string& section,
                              const std::string& key) const;

  // Every `section.key` present, for unknown-key diagnostics.
  std::vector<std::string> keys() const;

 private:
  const Value* find(const std::string& section, const std::string& key) const;
  const Value& require(const std::string& section,
                       const std::string& key) const;

  std::map<std::string, Value> entries_;  // "section.key" -> value
};

// How the audit subcommand should drive the auditor.
struct AuditSettings {
  enum class Mode { kExact, kMonteCarlo, kScan };
  Mode mode = Mode::kExact;

  Record added{1, 1, 1.0};  // exact and mc modes: the record to add

  std::vector<double> universe_values;  // scan mode
  int universe_strata = 1;
  int universe_clusters = 1;
  int max_size = 4;

  std::int64_t n_samples = 100000;  // mc mode
  double confidence = 0.95;

  std::optional<std::uint64_t> seed;  // overridden by --seed
};

// One runnable scenario: a population, a design, a mechanism, and audit
// settings.
struct DesignConfig {
  std::string name;
  std::string population_path;  // as written in the file, for reporting
  Population population;
  SamplingDesign design;
  MechanismSpec mechanism;
  AuditSettings audit;
};

// Parses a scenario file and loads its population (path resolved relative
// to the config file's directory). Throws ConfigError / ParseError; missing
// files throw ConfigError naming the path.
DesignConfig load_design_config(const std::string& path);

}  // namespace surveydp

#endif  // SURVEYDP_CONFIG_HPP_
