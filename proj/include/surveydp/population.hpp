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

#ifndef SURVEYDP_POPULATION_HPP_
#define SURVEYDP_POPULATION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace surveydp {

// Exhaustive enumerations refuse to start when they would visit more than
// this many items, unless the caller raises the budget.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

// One survey unit. Stratum and cluster ids are 1-based.
struct Record {
  int stratum = 1;
  int cluster = 1;
  double value = 0.0;

  friend bool operator==(const Record&, const Record&) = default;
};

// Orders records by (stratum, cluster, value); used for canonical
// enumeration order and multiset comparisons.
bool record_less(const Record& a, const Record& b);

// A finite multiset of records together with the stratum/cluster id spaces
// it lives in. Immutable after construction; neighbor operations return new
// instances. Record order is insertion order.
class Population {
 public:
  Population() = default;

  // Validates every record against the id spaces: throws Error when a
  // stratum id is outside [1, num_strata] or a cluster id is outside
  // [1, num_clusters], or when a bound is negative.
  Population(std::vector<Record> records, int num_strata, int num_clusters);

  // Id spaces inferred as the componentwise maxima over the records
  // (0 for an empty multiset).
  static Population infer(std::vector<Record> records);

  const std::vector<Record>& records() const { return records_; }
  int num_strata() const { return num_strata_; }
  int num_clusters() const { return num_clusters_; }
  std::size_t size() const { return records_.size(); }

  // Multiset equality: equal id spaces and records equal up to order.
  bool same_multiset(const Population& other) const;

 private:
  std::vector<Record> records_;
  int num_strata_ = 0;
  int num_clusters_ = 0;
};

// A population and its add-one neighbor. `bounds_grew` is set when the
// added record enlarged the stratum or cluster id space.
struct NeighborPair {
  Population base;
  Population extended;
  Record added;
  bool bounds_grew = false;
};

// Returns {p, p + r}. The extended population's id spaces grow to admit the
// added record if needed; the base keeps its own.
NeighborPair add_record(const Population& p, const Record& r);

// Parses the textual population format: a `stratum,cluster,value` header,
// then one record per row (integer ids, decimal value). Lines starting with
// `#` are comments; the optional directive `#k=K,m=M` declares the id
// spaces instead of inferring them from the data. Blank lines are skipped.
// Throws ParseError with the offending 1-based line number.
Population load_population(std::string_view csv_text);

// load_population applied to a file's contents; errors mention the path.
Population load_population_file(const std::string& path);

// Per-stratum record counts, indexed 0..num_strata-1.
std::vector<std::int64_t> strata_sizes(const Population& p);

// Per-cluster record counts, indexed 0..num_clusters-1.
std::vector<std::int64_t> cluster_sizes(const Population& p);

// The record-type grid used by exhaustive worst-case searches: every
// (stratum, cluster, value) combination over the given id spaces and value
// list.
struct Universe {
  std::vector<double> values;
  int num_strata = 1;
  int num_clusters = 1;

  // Distinct record types in canonical order. Throws Error when values is
  // empty or a bound is < 1.
  std::vector<Record> record_types() const;
};

// Number of multisets of size <= max_size over `num_types` distinct types:
// sum over r of C(num_types + r - 1, r). Saturates at uint64 max.
std::uint64_t count_populations(std::size_t num_types, int max_size);

// Visits every population of size <= max_size over the universe, each
// exactly once, in canonical order (records sorted, lexicographic across
// sizes). Throws BudgetError up front when the count exceeds the budget.
void for_each_population(const Universe& u, int max_size,
                         std::uint64_t budget,
                         const std::function<void(const Population&)>& visit);

std::vector<Population> enumerate_populations(
    const Universe& u, int max_size, std::uint64_t budget = kDefaultBudget);

}  // namespace surveydp

#endif  // SURVEYDP_POPULATION_HPP_
