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

#include "surveydp/stats.hpp"

#include <boost/math/distributions/beta.hpp>

#include "surveydp/errors.hpp"

namespace surveydp {

namespace {

void check_args(std::int64_t successes, std::int64_t trials, double alpha) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw Error("binomial bound needs 0 <= successes <= trials, trials >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error("alpha must lie in (0, 1)");
  }
}

}  // namespace

double clopper_pearson_lower(std::int64_t successes, std::int64_t trials,
                             double alpha) {
  check_args(successes, trials, alpha);
  if (successes == 0) return 0.0;
  const boost::math::beta_distribution<double> dist(
      static_cast<double>(successes),
      static_cast<double>(trials - successes + 1));
  return boost::math::quantile(dist, alpha);
}

double clopper_pearson_upper(std::int64_t successes, std::int64_t trials,
                             double alpha) {
  check_args(successes, trials, alpha);
  if (successes == trials) return 1.0;
  const boost::math::beta_distribution<double> dist(
      static_cast<double>(successes + 1),
      static_cast<double>(trials - successes));
  return boost::math::quantile(dist, 1.0 - alpha);
}

}  // namespace surveydp
