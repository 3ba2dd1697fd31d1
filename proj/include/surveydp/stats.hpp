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

#ifndef SURVEYDP_STATS_HPP_
#define SURVEYDP_STATS_HPP_

#include <cstdint>

namespace surveydp {

// One-sided exact binomial (Clopper-Pearson) bounds on the success
// probability p given k successes in n trials:
// P(p < lower) <= alpha and P(p > upper) <= alpha for the true p.
double clopper_pearson_lower(std::int64_t successes, std::int64_t trials,
                             double alpha);
double clopper_pearson_upper(std::int64_t successes, std::int64_t trials,
                             double alpha);

}  // namespace surveydp

#endif  // SURVEYDP_STATS_HPP_
