// Copyright 2026 The PrefixHH Authors
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

#ifndef PREFIXHH_RNG_HPP
#define PREFIXHH_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace prefixhh {

// splitmix64 finalizer; full-avalanche mix used both as a generator step and
// to derive independent stream seeds from (seed, tag...) tuples.
inline constexpr uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic stream-seed derivation. Streams derived from distinct tag
// tuples are treated as independent.
inline constexpr uint64_t derive_seed(uint64_t seed,
                                      std::initializer_list<uint64_t> tags) {
  uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
  for (uint64_t t : tags) {
    h = mix64(h ^ mix64(t));
  }
  return h;
}

inline constexpr uint64_t derive_seed(uint64_t seed, uint64_t a) {
  return derive_seed(seed, {a});
}
inline constexpr uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return derive_seed(seed, {a, b});
}
inline constexpr uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b,
                                      uint64_t c) {
  return derive_seed(seed, {a, b, c});
}

// Counter-based splitmix64 generator. Satisfies UniformRandomBitGenerator so
// it can drive the <random> distributions. Construction is a single store,
// which keeps per-device stream creation cheap.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<uint64_t>::max();
  }

  result_type operator()() { return mix64(state_ += kGamma); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    // Rejection sampling over the largest multiple of n.
    const uint64_t limit = max() - max() % n;
    uint64_t v = (*this)();
    while (v >= limit) v = (*this)();
    return v % n;
  }

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  uint64_t state_;
};

}  // namespace prefixhh

#endif  // PREFIXHH_RNG_HPP
