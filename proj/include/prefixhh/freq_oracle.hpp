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

#ifndef PREFIXHH_FREQ_ORACLE_HPP
#define PREFIXHH_FREQ_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "prefixhh/rng.hpp"

namespace prefixhh {

// Report index for devices with nothing to send; encoded as the all-zeros
// input vector before randomization.
inline constexpr std::optional<uint64_t> kBot = std::nullopt;

struct OracleParams {
  double epsilon_local = 0.0;
  uint64_t domain_size = 0;  // m, excluding the bottom slot
  double alpha0 = 0.0;       // P(output 1 | input 0)
  double alpha1 = 0.0;       // P(output 1 | input 1)

  // alpha1 = 1/2, alpha0 = 1/(e^eps + 1). Worst-case likelihood ratio over
  // inputs differing in one data point is exactly e^eps.
  static OracleParams replacement(double epsilon_local, uint64_t domain_size);
  // alpha0 = 1 - alpha1 = 1/(e^eps + 1). Symmetric noise on both branches;
  // per-coordinate ratio e^eps.
  static OracleParams deletion(double epsilon_local, uint64_t domain_size);

  void validate() const;
};

// One privatized report: m+1 bits, index m is the bottom slot.
struct PrivatizedVector {
  std::vector<uint8_t> bits;
};

// Coordinatewise sum of privatized reports from n devices.
struct AggregateReport {
  std::vector<uint32_t> counts;  // length m+1
  uint64_t n = 0;
};

struct FrequencyEstimate {
  std::vector<double> f_tilde;  // length m, debiased; may be negative
  double sigma = 0.0;           // noise std upper bound
};

// index in [0, m] or kBot. Output bit j is 1 w.p. alpha1 when input bit j is
// 1 and alpha0 otherwise, independently per coordinate.
PrivatizedVector randomize(std::optional<uint64_t> index,
                           const OracleParams& params, Rng& rng);

// f_tilde[d] = (counts[d] - n*alpha0) / (alpha1 - alpha0);
// sigma = sqrt(n * max(a0(1-a0), a1(1-a1))) / (alpha1 - alpha0).
FrequencyEstimate estimate(const AggregateReport& agg,
                           const OracleParams& params);

// High-probability estimator error bound: C * sqrt(n e^eps / (e^eps - 1)^2
// * log(1/beta)), C = 2. Test-calibration constant, not a guarantee.
double oracle_error_bound(const OracleParams& params, uint64_t n, double beta);

// Order-independent exact sum, as the aggregation protocol would release it.
AggregateReport sum_reports(std::span<const PrivatizedVector> reports);

// Local randomizer + matching estimator behind one seam so other oracles
// (PI-RAPPOR style) can slot in without touching server or engine code.
class FrequencyOracle {
 public:
  virtual ~FrequencyOracle() = default;

  virtual const OracleParams& params() const = 0;
  virtual PrivatizedVector randomize(std::optional<uint64_t> index,
                                     Rng& rng) const = 0;
  virtual FrequencyEstimate estimate(const AggregateReport& agg) const = 0;

  // Samples the aggregate of n reports whose true one-hot counts over [0, m)
  // are true_counts (bottom reports are the remainder). Base implementation
  // materializes every report; overrides may sample the sum directly as long
  // as the distribution is identical.
  virtual AggregateReport sample_aggregate(
      const std::vector<uint32_t>& true_counts, uint64_t n,
      uint64_t seed) const;
};

class OheBrrOracle : public FrequencyOracle {
 public:
  explicit OheBrrOracle(OracleParams params, int threads = 1);

  const OracleParams& params() const override { return params_; }
  PrivatizedVector randomize(std::optional<uint64_t> index,
                             Rng& rng) const override;
  FrequencyEstimate estimate(const AggregateReport& agg) const override;
  // Exact-distribution shortcut: counts[j] ~ Binom(k_j, a1) + Binom(n-k_j, a0)
  // independently per coordinate. Coordinates draw from fixed per-block
  // streams, so the result is identical at any thread count.
  AggregateReport sample_aggregate(const std::vector<uint32_t>& true_counts,
                                   uint64_t n, uint64_t seed) const override;

 private:
  OracleParams params_;
  int threads_;
};

using OracleFactory = std::function<std::unique_ptr<FrequencyOracle>(
    double epsilon_local, uint64_t domain_size)>;

OracleFactory replacement_ohe_brr_factory(int threads = 1);
OracleFactory deletion_ohe_brr_factory(int threads = 1);

}  // namespace prefixhh

#endif  // PREFIXHH_FREQ_ORACLE_HPP
