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

#ifndef SURVEYDP_MECHANISMS_HPP_
#define SURVEYDP_MECHANISMS_HPP_

#include <string>
#include <vector>

#include "surveydp/population.hpp"
#include "surveydp/rng.hpp"

namespace surveydp {

class SeededStream;
struct OutcomeDistribution;

// The statistic released by the mechanism.
struct Query {
  enum class Kind { kCount, kClampedSum };

  Kind kind = Kind::kCount;
  double lo = 0.0;  // clamp bounds, clamped_sum only
  double hi = 1.0;

  static Query count() { return Query{}; }
  // Throws Error unless lo < hi.
  static Query clamped_sum(double lo, double hi);

  std::string describe() const;
};

// A Laplace mechanism: releases query_value + Lap(sensitivity/epsilon).
struct MechanismSpec {
  Query query;
  double epsilon = 1.0;

  // Throws Error unless epsilon > 0 and the query is valid.
  static MechanismSpec laplace(Query q, double epsilon);

  double scale() const;
};

double query_value(const Query& q, const Population& dataset);

// Worst-case change of the query under adding or removing one record.
double query_sensitivity(const Query& q);

// Exact output law of a mechanism run on a random sampled dataset: a finite
// mixture of Laplace distributions sharing one scale. Centers are strictly
// increasing, weights sum to 1.
class LaplaceMixture {
 public:
  struct Component {
    double center;
    double weight;
  };

  // Merges components with centers closer than 1e-12, drops weights below
  // drop_threshold, renormalizes. Throws Error when scale <= 0, any weight
  // is negative, or nothing survives.
  static LaplaceMixture from_components(double scale,
                                        std::vector<Component> components,
                                        double drop_threshold = 1e-15);

  double scale() const { return scale_; }
  const std::vector<Component>& components() const { return components_; }

  double density(double a) const;
  double log_density(double a) const;

 private:
  LaplaceMixture(double scale, std::vector<Component> components)
      : scale_(scale), components_(std::move(components)) {}

  double scale_;
  std::vector<Component> components_;
};

// Output law of `m` applied to a dataset drawn from `outcomes`: one
// component per distinct query value, weighted by total outcome probability.
LaplaceMixture mixture_from_outcomes(const OutcomeDistribution& outcomes,
                                     const Query& q, const MechanismSpec& m);

double mixture_density(const LaplaceMixture& mix, double a);

// One mechanism release on a fixed dataset; deterministic given the stream.
double sample_output(const MechanismSpec& m, const Population& dataset,
                     SeededStream& rng);

}  // namespace surveydp

#endif  // SURVEYDP_MECHANISMS_HPP_
