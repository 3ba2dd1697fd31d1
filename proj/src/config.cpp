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

#include "surveydp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "surveydp/allocation.hpp"
#include "surveydp/errors.hpp"

namespace surveydp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(std::string_view field, int line) {
  const std::string copy{trim(field)};
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    throw ParseError("expected a number, got '" + copy + "'", line);
  }
  return v;
}

ConfigTable::Value parse_value(std::string_view raw, int line) {
  ConfigTable::Value value;
  raw = trim(raw);
  if (raw.empty()) throw ParseError("missing value", line);
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw ParseError("unterminated string", line);
    }
    value.kind = ConfigTable::Value::Kind::kString;
    value.string = std::string(raw.substr(1, raw.size() - 2));
    return value;
  }
  if (raw == "true" || raw == "false") {
    value.kind = ConfigTable::Value::Kind::kBool;
    value.boolean = raw == "true";
    return value;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError("unterminated array", line);
    value.kind = ConfigTable::Value::Kind::kNumberList;
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      const std::string_view item =
          comma == std::string_view::npos ? body : body.substr(0, comma);
      value.list.push_back(parse_number(item, line));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
      if (trim(body).empty()) {
        throw ParseError("trailing comma in array", line);
      }
    }
    return value;
  }
  value.kind = ConfigTable::Value::Kind::kNumber;
  value.number = parse_number(raw, line);
  return value;
}

}  // namespace

ConfigTable ConfigTable::parse(std::string_view text) {
  ConfigTable table;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError("malformed section header", line_no);
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value'", line_no);
    }
    const std::string key{trim(line.substr(0, eq))};
    if (key.empty()) throw ParseError("empty key", line_no);
    const std::string full = section.empty() ? key : section + "." + key;
    if (table.entries_.count(full) != 0) {
      throw ParseError("duplicate key '" + full + "'", line_no);
    }
    table.entries_[full] = parse_value(line.substr(eq + 1), line_no);
  }
  return table;
}

const ConfigTable::Value* ConfigTable::find(const std::string& section,
                                            const std::string& key) const {
  const std::string full = section.empty() ? key : section + "." + key;
  const auto it = entries_.find(full);
  return it == entries_.end() ? nullptr : &it->second;
}

const ConfigTable::Value& ConfigTable::require(const std::string& section,
                                               const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr) {
    throw ConfigError("missing config key '" +
                      (section.empty() ? key : section + "." + key) + "'");
  }
  return *v;
}

bool ConfigTable::has(const std::string& section,
                      const std::string& key) const {
  return find(section, key) != nullptr;
}

double ConfigTable::number(const std::string& section,
                           const std::string& key) const {
  const Value& v = require(section, key);
  if (v.kind != Value::Kind::kNumber) {
    throw ConfigError("config key '" + section + "." + key +
                      "' must be a number");
  }
  return v.number;
}

double ConfigTable::number_or(const std::string& section,
                              const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

std::int64_t ConfigTable::integer(const std::string& section,
                                  const std::string& key) const {
  const double v = number(section, key);
  const double rounded = std::nearbyint(v);
  if (std::abs(v - rounded) > 1e-9) {
    throw ConfigError("config key '" + section + "." + key +
                      "' must be an integer");
  }
  return static_cast<std::int64_t>(rounded);
}

std::int64_t ConfigTable::integer_or(const std::string& section,
                                     const std::string& key,
                                     std::int64_t fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

std::string ConfigTable::text(const std::string& section,
                              const std::string& key) const {
  const Value& v = require(section, key);
  if (v.kind != Value::Kind::kString) {
    throw ConfigError("config key '" + section + "." + key +
                      "' must be a quoted string");
  }
  return v.string;
}

std::string ConfigTable::text_or(const std::string& section,
                                 const std::string& key,
                                 const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

std::vector<double> ConfigTable::numbers(const std::string& section,
                                         const std::string& key) const {
  const Value& v = require(section, key);
  if (v.kind == Value::Kind::kNumberList) return v.list;
  if (v.kind == Value::Kind::kNumber) return {v.number};
  throw ConfigError("config key '" + section + "." + key +
                    "' must be an array of numbers");
}

std::vector<std::string> ConfigTable::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [key, value] : entries_) out.push_back(key);
  return out;
}

namespace {

AllocationRule allocation_from_config(const ConfigTable& table) {
  const std::string kind = table.text("design", "alloc");
  if (kind == "fixed") {
    const std::vector<double> raw = table.numbers("design", "counts");
    std::vector<std::int64_t> counts;
    counts.reserve(raw.size());
    for (double v : raw) counts.push_back(static_cast<std::int64_t>(v));
    return AllocationRule::fixed(std::move(counts));
  }
  if (kind == "parity_demo") return AllocationRule::parity_demo();
  if (kind == "proportional_floor") {
    return AllocationRule::proportional_floor(table.integer("design", "total"));
  }
  if (kind == "proportional_hamilton") {
    return AllocationRule::proportional_hamilton(
        table.integer("design", "total"));
  }
  if (kind == "huntington_hill") {
    return AllocationRule::huntington_hill(table.integer("design", "total"));
  }
  if (kind == "randomized_rounding") {
    return AllocationRule::randomized_rounding(
        table.numbers("design", "rates"));
  }
  throw ConfigError("unknown allocation rule '" + kind + "'");
}

SamplingDesign design_from_config(const ConfigTable& table) {
  const std::string kind = table.text("design", "kind");
  if (kind == "poisson") {
    return SamplingDesign::poisson(table.numbers("design", "rates"));
  }
  if (kind == "swor") {
    return SamplingDesign::swor(allocation_from_config(table));
  }
  if (kind == "cluster") {
    const std::string within = table.text_or("design", "within", "census");
    WithinCluster stage;
    if (within == "census") {
      stage = WithinCluster::census();
    } else if (within == "poisson") {
      stage = WithinCluster::poisson(table.number("design", "within_rate"));
    } else {
      throw ConfigError("design.within must be 'census' or 'poisson'");
    }
    return SamplingDesign::cluster(
        static_cast<int>(table.integer_or("design", "choose", 1)), stage);
  }
  throw ConfigError("design.kind must be poisson, swor, or cluster");
}

MechanismSpec mechanism_from_config(const ConfigTable& table) {
  const std::string kind = table.text_or("mechanism", "query", "count");
  Query query;
  if (kind == "count") {
    query = Query::count();
  } else if (kind == "clamped_sum") {
    query = Query::clamped_sum(table.number("mechanism", "lo"),
                               table.number("mechanism", "hi"));
  } else {
    throw ConfigError("mechanism.query must be count or clamped_sum");
  }
  return MechanismSpec::laplace(query, table.number("mechanism", "epsilon"));
}

AuditSettings audit_from_config(const ConfigTable& table) {
  AuditSettings audit;
  const std::string mode = table.text_or("audit", "mode", "exact");
  if (mode == "exact") {
    audit.mode = AuditSettings::Mode::kExact;
  } else if (mode == "mc") {
    audit.mode = AuditSettings::Mode::kMonteCarlo;
  } else if (mode == "scan") {
    audit.mode = AuditSettings::Mode::kScan;
  } else {
    throw ConfigError("audit.mode must be exact, mc, or scan");
  }
  audit.added.stratum =
      static_cast<int>(table.integer_or("audit", "add_stratum", 1));
  audit.added.cluster =
      static_cast<int>(table.integer_or("audit", "add_cluster", 1));
  audit.added.value = table.number_or("audit", "add_value", 1.0);
  if (table.has("audit", "universe")) {
    audit.universe_values = table.numbers("audit", "universe");
  }
  audit.universe_strata =
      static_cast<int>(table.integer_or("audit", "universe_strata", 1));
  audit.universe_clusters =
      static_cast<int>(table.integer_or("audit", "universe_clusters", 1));
  audit.max_size = static_cast<int>(table.integer_or("audit", "max_size", 4));
  audit.n_samples = table.integer_or("audit", "n_samples", 100000);
  audit.confidence = table.number_or("audit", "confidence", 0.95);
  if (table.has("audit", "seed")) {
    const std::int64_t seed = table.integer("audit", "seed");
    if (seed < 0) throw ConfigError("audit.seed must be non-negative");
    audit.seed = static_cast<std::uint64_t>(seed);
  }
  if (audit.mode == AuditSettings::Mode::kScan &&
      audit.universe_values.empty()) {
    throw ConfigError("scan mode needs audit.universe");
  }
  return audit;
}

}  // namespace

DesignConfig load_design_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ConfigTable table;
  try {
    table = ConfigTable::parse(buf.str());
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }

  DesignConfig config;
  config.name =
      table.text_or("", "name", std::filesystem::path(path).stem().string());
  config.design = design_from_config(table);
  config.mechanism = mechanism_from_config(table);
  config.audit = audit_from_config(table);

  config.population_path = table.text_or("", "population", "");
  if (!config.population_path.empty()) {
    const std::filesystem::path resolved =
        std::filesystem::path(path).parent_path() / config.population_path;
    try {
      config.population = load_population_file(resolved.string());
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  } else if (config.audit.mode != AuditSettings::Mode::kScan) {
    throw ConfigError("config needs a population file except in scan mode");
  }
  return config;
}

}  // namespace surveydp
