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

#include "surveydp/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace surveydp {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string method_name(AuditMethod method) {
  switch (method) {
    case AuditMethod::kExact:
      return "exact";
    case AuditMethod::kMonteCarlo:
      return "monte_carlo";
    case AuditMethod::kClosedForm:
      return "closed_form";
  }
  return "unknown";
}

ReportRow report_row(const std::string& scenario, double eps_base,
                     const std::string& design,
                     const PrivacyReport& report) {
  ReportRow row;
  row.scenario = scenario;
  row.eps_base = eps_base;
  row.design = design;
  row.eps_add = report.eps_add;
  row.eps_remove = report.eps_remove;
  row.eps_effective = report.eps_effective;
  row.witness = report.witness_output;
  row.method = method_name(report.method);
  return row;
}

namespace {

// Report text fields never need quoting today, but keep the writer honest.
std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "scenario,eps_base,design,eps_add,eps_remove,eps_effective,witness,"
      "method\n";
  for (const ReportRow& row : rows) {
    out += csv_escape(row.scenario);
    out += ',';
    out += format_double(row.eps_base);
    out += ',';
    out += csv_escape(row.design);
    out += ',';
    out += format_double(row.eps_add);
    out += ',';
    out += format_double(row.eps_remove);
    out += ',';
    out += format_double(row.eps_effective);
    out += ',';
    out += format_double(row.witness);
    out += ',';
    out += row.method;
    out += '\n';
  }
  return out;
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRow& row : rows) {
    nlohmann::json obj;
    obj["scenario"] = row.scenario;
    obj["eps_base"] = row.eps_base;
    obj["design"] = row.design;
    obj["eps_add"] = row.eps_add;
    obj["eps_remove"] = row.eps_remove;
    obj["eps_effective"] = row.eps_effective;
    // Infinities are not valid JSON numbers; use the same tags as CSV.
    if (std::isfinite(row.witness)) {
      obj["witness"] = row.witness;
    } else {
      obj["witness"] = format_double(row.witness);
    }
    obj["method"] = row.method;
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

}  // namespace surveydp
