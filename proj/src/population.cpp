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

#include "surveydp/population.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include "surveydp/errors.hpp"

namespace surveydp {

bool record_less(const Record& a, const Record& b) {
  return std::tie(a.stratum, a.cluster, a.value) <
         std::tie(b.stratum, b.cluster, b.value);
}

Population::Population(std::vector<Record> records, int num_strata,
                       int num_clusters)
    : records_(std::move(records)),
      num_strata_(num_strata),
      num_clusters_(num_clusters) {
  if (num_strata_ < 0 || num_clusters_ < 0) {
    throw Error("population id bounds must be non-negative");
  }
  for (const Record& r : records_) {
    if (r.stratum < 1 || r.stratum > num_strata_) {
      throw Error("record stratum " + std::to_string(r.stratum) +
                  " outside [1, " + std::to_string(num_strata_) + "]");
    }
    if (r.cluster < 1 || r.cluster > num_clusters_) {
      throw Error("record cluster " + std::to_string(r.cluster) +
                  " outside [1, " + std::to_string(num_clusters_) + "]");
    }
  }
}

Population Population::infer(std::vector<Record> records) {
  int k = 0;
  int m = 0;
  for (const Record& r : records) {
    k = std::max(k, r.stratum);
    m = std::max(m, r.cluster);
  }
  return Population(std::move(records), k, m);
}

bool Population::same_multiset(const Population& other) const {
  if (num_strata_ != other.num_strata_ || num_clusters_ != other.num_clusters_)
    return false;
  if (records_.size() != other.records_.size()) return false;
  std::vector<Record> a = records_;
  std::vector<Record> b = other.records_;
  std::sort(a.begin(), a.end(), record_less);
  std::sort(b.begin(), b.end(), record_less);
  return a == b;
}

NeighborPair add_record(const Population& p, const Record& r) {
  if (r.stratum < 1 || r.cluster < 1) {
    throw Error("added record must have positive ids");
  }
  NeighborPair pair;
  pair.base = p;
  pair.added = r;
  const int k = std::max(p.num_strata(), r.stratum);
  const int m = std::max(p.num_clusters(), r.cluster);
  pair.bounds_grew = k != p.num_strata() || m != p.num_clusters();
  std::vector<Record> extended = p.records();
  extended.push_back(r);
  pair.extended = Population(std::move(extended), k, m);
  return pair;
}

namespace {

// Splits on ','; does not trim (fields are numbers, whitespace tolerated by
// the numeric parsers below).
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

int parse_id(std::string_view field, int line) {
  field = trim(field);
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("expected integer id, got '" + std::string(field) + "'",
                     line);
  }
  if (v < 1) {
    throw ParseError("ids are 1-based, got " + std::to_string(v), line);
  }
  return v;
}

double parse_value(std::string_view field, int line) {
  field = trim(field);
  // std::from_chars<double> is incomplete on some toolchains; strtod on a
  // bounded copy is equivalent here.
  const std::string copy(field);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    throw ParseError("expected numeric value, got '" + copy + "'", line);
  }
  return v;
}

// Accepts `#k=K,m=M` with optional spaces; returns false for ordinary
// comments.
bool parse_directive(std::string_view comment, int line, int* k, int* m) {
  std::string compact;
  for (char c : comment) {
    if (c != ' ' && c != '\t' && c != '\r') compact.push_back(c);
  }
  if (compact.rfind("#k=", 0) != 0) return false;
  const std::size_t comma = compact.find(",m=");
  if (comma == std::string::npos) {
    throw ParseError("directive must be '#k=K,m=M'", line);
  }
  const std::string ks = compact.substr(3, comma - 3);
  const std::string ms = compact.substr(comma + 3);
  try {
    std::size_t used = 0;
    *k = std::stoi(ks, &used);
    if (used != ks.size()) throw std::invalid_argument(ks);
    *m = std::stoi(ms, &used);
    if (used != ms.size()) throw std::invalid_argument(ms);
  } catch (const std::exception&) {
    throw ParseError("directive must be '#k=K,m=M'", line);
  }
  if (*k < 0 || *m < 0) {
    throw ParseError("directive bounds must be non-negative", line);
  }
  return true;
}

}  // namespace

Population load_population(std::string_view csv_text) {
  std::vector<Record> records;
  std::vector<int> record_lines;
  bool saw_header = false;
  int declared_k = -1;
  int declared_m = -1;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= csv_text.size()) {
    const std::size_t nl = csv_text.find('\n', pos);
    std::string_view line = csv_text.substr(
        pos, nl == std::string_view::npos ? csv_text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? csv_text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      int k = 0;
      int m = 0;
      if (parse_directive(trimmed, line_no, &k, &m)) {
        declared_k = k;
        declared_m = m;
      }
      continue;
    }
    if (!saw_header) {
      std::string compact;
      for (char c : trimmed) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "stratum,cluster,value") {
        throw ParseError("expected header 'stratum,cluster,value'", line_no);
      }
      saw_header = true;
      continue;
    }
    const std::vector<std::string_view> fields = split_fields(trimmed);
    if (fields.size() != 3) {
      throw ParseError("expected 3 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    Record r;
    r.stratum = parse_id(fields[0], line_no);
    r.cluster = parse_id(fields[1], line_no);
    r.value = parse_value(fields[2], line_no);
    records.push_back(r);
    record_lines.push_back(line_no);
  }
  if (!saw_header) {
    throw ParseError("missing header 'stratum,cluster,value'", 1);
  }

  if (declared_k >= 0) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].stratum > declared_k || records[i].cluster > declared_m) {
        throw ParseError("record ids exceed declared bounds k=" +
                             std::to_string(declared_k) +
                             ", m=" + std::to_string(declared_m),
                         record_lines[i]);
      }
    }
    return Population(std::move(records), declared_k, declared_m);
  }
  return Population::infer(std::move(records));
}

Population load_population_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open population file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_population(buf.str());
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<std::int64_t> strata_sizes(const Population& p) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(p.num_strata()), 0);
  for (const Record& r : p.records()) {
    ++sizes[static_cast<std::size_t>(r.stratum - 1)];
  }
  return sizes;
}

std::vector<std::int64_t> cluster_sizes(const Population& p) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(p.num_clusters()),
                                  0);
  for (const Record& r : p.records()) {
    ++sizes[static_cast<std::size_t>(r.cluster - 1)];
  }
  return sizes;
}

std::vector<Record> Universe::record_types() const {
  if (values.empty()) throw Error("universe needs at least one value");
  if (num_strata < 1 || num_clusters < 1) {
    throw Error("universe id bounds must be at least 1");
  }
  std::vector<double> sorted_values = values;
  std::sort(sorted_values.begin(), sorted_values.end());
  sorted_values.erase(
      std::unique(sorted_values.begin(), sorted_values.end()),
      sorted_values.end());
  std::vector<Record> types;
  types.reserve(sorted_values.size() *
                static_cast<std::size_t>(num_strata * num_clusters));
  for (int s = 1; s <= num_strata; ++s) {
    for (int c = 1; c <= num_clusters; ++c) {
      for (double v : sorted_values) {
        types.push_back(Record{s, c, v});
      }
    }
  }
  return types;
}

std::uint64_t count_populations(std::size_t num_types, int max_size) {
  // sum_{r=0..max} C(t+r-1, r), computed incrementally; saturating.
  const std::uint64_t kMax = ~std::uint64_t{0};
  std::uint64_t total = 0;
  std::uint64_t term = 1;  // r = 0
  for (int r = 0; r <= max_size; ++r) {
    if (kMax - total < term) return kMax;
    total += term;
    // term_{r+1} = term_r * (t + r) / (r + 1)
    const std::uint64_t numer = num_types + static_cast<std::uint64_t>(r);
    if (numer != 0 && term > kMax / numer) return kMax;
    term = term * numer / static_cast<std::uint64_t>(r + 1);
  }
  return total;
}

namespace {

void visit_multisets(const std::vector<Record>& types, int max_size,
                     std::size_t first_type, std::vector<Record>* current,
                     int k, int m,
                     const std::function<void(const Population&)>& visit) {
  visit(Population(*current, k, m));
  if (static_cast<int>(current->size()) == max_size) return;
  for (std::size_t t = first_type; t < types.size(); ++t) {
    current->push_back(types[t]);
    visit_multisets(types, max_size, t, current, k, m, visit);
    current->pop_back();
  }
}

}  // namespace

void for_each_population(const Universe& u, int max_size,
                         std::uint64_t budget,
                         const std::function<void(const Population&)>& visit) {
  if (max_size < 0) throw Error("max_size must be non-negative");
  const std::vector<Record> types = u.record_types();
  const std::uint64_t required = count_populations(types.size(), max_size);
  if (required > budget) {
    throw BudgetError("population enumeration", required, budget);
  }
  std::vector<Record> current;
  visit_multisets(types, max_size, 0, &current, u.num_strata, u.num_clusters,
                  visit);
}

std::vector<Population> enumerate_populations(const Universe& u, int max_size,
                                              std::uint64_t budget) {
  std::vector<Population> out;
  for_each_population(u, max_size, budget,
                      [&out](const Population& p) { out.push_back(p); });
  return out;
}

}  // namespace surveydp
