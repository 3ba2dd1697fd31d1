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

#ifndef SURVEYDP_CLI_HPP_
#define SURVEYDP_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace surveydp {

// Runs the command-line front end. Exit codes: 0 success, 2 configuration
// or usage error, 3 enumeration budget exceeded. All randomness is
// controlled by --seed; equal invocations with equal seeds produce
// byte-identical machine reports.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

// Convenience overload for in-process invocation (tests): args exclude the
// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace surveydp

#endif  // SURVEYDP_CLI_HPP_
