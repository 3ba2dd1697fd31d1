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

#ifndef SURVEYDP_RNG_HPP_
#define SURVEYDP_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace surveydp {

// Deterministic splittable random stream. Every draw depends only on the
// seed and the draw index, so runs with equal seeds are byte-identical
// across platforms with IEEE doubles. The core generator is splitmix64;
// child streams are derived by hashing the parent seed with the child
// index, not by sharing state, so reordering draws in one stream never
// perturbs another.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : state_(seed), seed_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1); never returns an endpoint, so it
  // is safe inside logs.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform on {0, ..., n-1} by rejection, bias-free.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Laplace(0, scale) by inverse CDF.
  double laplace(double scale) {
    const double u = uniform01() - 0.5;
    const double mag = std::log1p(-2.0 * std::abs(u));
    return u < 0.0 ? scale * mag : -scale * mag;
  }

  // Independent stream for sub-task `index`; derived from the construction
  // seed, so the parent's own draw position does not matter.
  SeededStream child(std::uint64_t index) const {
    SeededStream mixer(seed_ ^ (0x6a09e667f3bcc909ull + index));
    mixer.next_u64();
    return SeededStream(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
  // Construction seed, kept so child() never depends on draw position.
  std::uint64_t seed_;
};

}  // namespace surveydp

#endif  // SURVEYDP_RNG_HPP_
