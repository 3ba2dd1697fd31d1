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

#include "surveydp/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "surveydp/errors.hpp"
#include "surveydp/samplers.hpp"

namespace surveydp {

Query Query::clamped_sum(double lo, double hi) {
  if (!(lo < hi)) {
    throw Error("clamped_sum needs lo < hi");
  }
  Query q;
  q.kind = Kind::kClampedSum;
  q.lo = lo;
  q.hi = hi;
  return q;
}

std::string Query::describe() const {
  if (kind == Kind::kCount) return "count";
  return "clamped_sum(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
}

MechanismSpec MechanismSpec::laplace(Query q, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error("mechanism epsilon must be positive and finite");
  }
  if (q.kind == Query::Kind::kClampedSum && !(q.lo < q.hi)) {
    throw Error("clamped_sum needs lo < hi");
  }
  return MechanismSpec{q, epsilon};
}

double MechanismSpec::scale() const {
  return query_sensitivity(query) / epsilon;
}

double query_value(const Query& q, const Population& dataset) {
  if (q.kind == Query::Kind::kCount) {
    return static_cast<double>(dataset.size());
  }
  double sum = 0.0;
  for (const Record& r : dataset.records()) {
    sum += std::clamp(r.value, q.lo, q.hi);
  }
  return sum;
}

double query_sensitivity(const Query& q) {
  if (q.kind == Query::Kind::kCount) return 1.0;
  return std::max(std::abs(q.lo), std::abs(q.hi));
}

LaplaceMixture LaplaceMixture::from_components(
    double scale, std::vector<Component> components, double drop_threshold) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error("mixture scale must be positive and finite");
  }
  for (const Component& c : components) {
    if (c.weight < 0.0 || !std::isfinite(c.weight) || !std::isfinite(c.center))
      throw Error("mixture components must be finite with weight >= 0");
  }
  std::sort(components.begin(), components.end(),
            [](const Component& a, const Component& b) {
              return a.center < b.center;
            });
  // Merge near-equal centers; quantization noise from query arithmetic must
  // not split one logical outcome into two components.
  constexpr double kMergeTolerance = 1e-12;
  std::vector<Component> merged;
  for (const Component& c : components) {
    if (!merged.empty() && c.center - merged.back().center <= kMergeTolerance) {
      const double w = merged.back().weight + c.weight;
      if (w > 0.0) {
        merged.back().center =
            (merged.back().center * merged.back().weight +
             c.center * c.weight) /
            w;
      }
      merged.back().weight = w;
    } else {
      merged.push_back(c);
    }
  }
  std::erase_if(merged, [drop_threshold](const Component& c) {
    return c.weight <= drop_threshold;
  });
  double total = 0.0;
  for (const Component& c : merged) total += c.weight;
  if (merged.empty() || !(total > 0.0)) {
    throw Error("mixture has no mass after merging and dropping");
  }
  for (Component& c : merged) c.weight /= total;
  return LaplaceMixture(scale, std::move(merged));
}

double LaplaceMixture::density(double a) const {
  double sum = 0.0;
  for (const Component& c : components_) {
    sum += c.weight * std::exp(-std::abs(a - c.center) / scale_);
  }
  return sum / (2.0 * scale_);
}

double LaplaceMixture::log_density(double a) const {
  // log-sum-exp over components so far tails stay finite.
  double max_term = -std::numeric_limits<double>::infinity();
  for (const Component& c : components_) {
    max_term = std::max(max_term,
                        std::log(c.weight) - std::abs(a - c.center) / scale_);
  }
  double sum = 0.0;
  for (const Component& c : components_) {
    sum += std::exp(std::log(c.weight) - std::abs(a - c.center) / scale_ -
                    max_term);
  }
  return max_term + std::log(sum) - std::log(2.0 * scale_);
}

LaplaceMixture mixture_from_outcomes(const OutcomeDistribution& outcomes,
                                     const Query& q, const MechanismSpec& m) {
  std::vector<LaplaceMixture::Component> components;
  components.reserve(outcomes.entries.size());
  for (const auto& entry : outcomes.entries) {
    components.push_back(
        {query_value(q, entry.subset), entry.probability});
  }
  return LaplaceMixture::from_components(m.scale(), std::move(components));
}

double mixture_density(const LaplaceMixture& mix, double a) {
  return mix.density(a);
}

double sample_output(const MechanismSpec& m, const Population& dataset,
                     SeededStream& rng) {
  return query_value(m.query, dataset) + rng.laplace(m.scale());
}

}  // namespace surveydp
