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

#ifndef SURVEYDP_REPORT_HPP_
#define SURVEYDP_REPORT_HPP_

#include <string>
#include <vector>

#include "surveydp/auditor.hpp"

namespace surveydp {

// One machine-report line. The same flat schema serves audits and bound
// calculators so downstream tooling parses a single format.
struct ReportRow {
  std::string scenario;
  double eps_base = 0.0;
  std::string design;
  double eps_add = 0.0;
  double eps_remove = 0.0;
  double eps_effective = 0.0;
  double witness = 0.0;  // +-infinity rendered as +inf / -inf
  std::string method;
};

// Round-trip decimal rendering (17 significant digits) so equal seeds give
// byte-identical files.
std::string format_double(double v);

std::string method_name(AuditMethod method);

ReportRow report_row(const std::string& scenario, double eps_base,
                     const std::string& design, const PrivacyReport& report);

// Header: scenario,eps_base,design,eps_add,eps_remove,eps_effective,
// witness,method
std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);

}  // namespace surveydp

#endif  // SURVEYDP_REPORT_HPP_
