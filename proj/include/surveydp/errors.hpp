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

#ifndef SURVEYDP_ERRORS_HPP_
#define SURVEYDP_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace surveydp {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (population CSV, config file). Carries the
// 1-based line number where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// An exhaustive enumeration would exceed the configured budget. Carries the
// number of items the enumeration would need so callers can report it.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::uint64_t required,
              std::uint64_t budget)
      : Error(what + ": needs " + std::to_string(required) +
              " items, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

// A without-replacement design asked a stratum for more units than it holds.
class InfeasibleAllocationError : public Error {
 public:
  InfeasibleAllocationError(int stratum, std::int64_t wanted,
                            std::int64_t available)
      : Error("stratum " + std::to_string(stratum) + ": allocation wants " +
              std::to_string(wanted) + " units but only " +
              std::to_string(available) + " are present"),
        stratum_(stratum),
        wanted_(wanted),
        available_(available) {}

  int stratum() const { return stratum_; }
  std::int64_t wanted() const { return wanted_; }
  std::int64_t available() const { return available_; }

 private:
  int stratum_;
  std::int64_t wanted_;
  std::int64_t available_;
};

// Invalid scenario configuration (missing keys, out-of-range values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace surveydp

#endif  // SURVEYDP_ERRORS_HPP_
