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

#include "prefixhh/freq_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "prefixhh/errors.hpp"

namespace prefixhh {

OracleParams OracleParams::replacement(double epsilon_local,
                                       uint64_t domain_size) {
  OracleParams p;
  p.epsilon_local = epsilon_local;
  p.domain_size = domain_size;
  p.alpha1 = 0.5;
  p.alpha0 = 1.0 / (std::exp(epsilon_local) + 1.0);
  p.validate();
  return p;
}

OracleParams OracleParams::deletion(double epsilon_local,
                                    uint64_t domain_size) {
  OracleParams p;
  p.epsilon_local = epsilon_local;
  p.domain_size = domain_size;
  p.alpha0 = 1.0 / (std::exp(epsilon_local) + 1.0);
  p.alpha1 = 1.0 - p.alpha0;
  p.validate();
  return p;
}

void OracleParams::validate() const {
  if (!(epsilon_local > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle params: epsilon_local must be > 0");
  }
  if (domain_size == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle params: domain_size must be >= 1");
  }
  if (!(alpha0 > 0.0 && alpha0 < 1.0 && alpha1 > 0.0 && alpha1 < 1.0 &&
        alpha0 < alpha1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle params: need 0 < alpha0 < alpha1 < 1");
  }
}

PrivatizedVector randomize(std::optional<uint64_t> index,
                           const OracleParams& params, Rng& rng) {
  params.validate();
  const uint64_t m = params.domain_size;
  if (index && *index > m) {
    throw Error(ErrorCode::kInvalidArgument, "randomize: index out of range");
  }
  PrivatizedVector out;
  out.bits.resize(m + 1);
  for (uint64_t j = 0; j <= m; ++j) {
    const bool hot = index && *index == j;
    out.bits[j] = rng.bernoulli(hot ? params.alpha1 : params.alpha0) ? 1 : 0;
  }
  return out;
}

FrequencyEstimate estimate(const AggregateReport& agg,
                           const OracleParams& params) {
  params.validate();
  if (agg.n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "estimate: no reports (n = 0)");
  }
  const uint64_t m = params.domain_size;
  if (agg.counts.size() != m + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "estimate: aggregate length mismatch");
  }
  const double n = static_cast<double>(agg.n);
  const double gap = params.alpha1 - params.alpha0;
  FrequencyEstimate est;
  est.f_tilde.resize(m);
  for (uint64_t d = 0; d < m; ++d) {
    est.f_tilde[d] = (static_cast<double>(agg.counts[d]) - n * params.alpha0) /
                     gap;
  }
  const double var0 = params.alpha0 * (1.0 - params.alpha0);
  const double var1 = params.alpha1 * (1.0 - params.alpha1);
  est.sigma = std::sqrt(n * std::max(var0, var1)) / gap;
  return est;
}

double oracle_error_bound(const OracleParams& params, uint64_t n,
                          double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle_error_bound: beta must be in (0, 1]");
  }
  constexpr double kC = 2.0;
  const double e = std::exp(params.epsilon_local);
  return kC * std::sqrt(static_cast<double>(n) * e / ((e - 1.0) * (e - 1.0)) *
                        std::log(1.0 / beta));
}

AggregateReport sum_reports(std::span<const PrivatizedVector> reports) {
  AggregateReport agg;
  if (reports.empty()) return agg;
  agg.counts.assign(reports.front().bits.size(), 0);
  for (const PrivatizedVector& r : reports) {
    if (r.bits.size() != agg.counts.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sum_reports: report length mismatch");
    }
    for (size_t j = 0; j < r.bits.size(); ++j) agg.counts[j] += r.bits[j];
  }
  agg.n = reports.size();
  return agg;
}

AggregateReport FrequencyOracle::sample_aggregate(
    const std::vector<uint32_t>& true_counts, uint64_t n,
    uint64_t seed) const {
  const uint64_t m = params().domain_size;
  if (true_counts.size() != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample_aggregate: true_counts length mismatch");
  }
  uint64_t assigned = 0;
  for (uint32_t c : true_counts) assigned += c;
  if (assigned > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample_aggregate: counts exceed n");
  }
  AggregateReport agg;
  agg.counts.assign(m + 1, 0);
  agg.n = n;
  Rng rng(derive_seed(seed, 0x0badc0deULL));
  uint64_t device = 0;
  auto add = [&](std::optional<uint64_t> index, uint64_t reps) {
    for (uint64_t i = 0; i < reps; ++i, ++device) {
      PrivatizedVector v = randomize(index, rng);
      for (uint64_t j = 0; j <= m; ++j) agg.counts[j] += v.bits[j];
    }
  };
  for (uint64_t d = 0; d < m; ++d) add(d, true_counts[d]);
  add(kBot, n - assigned);
  return agg;
}

OheBrrOracle::OheBrrOracle(OracleParams params, int threads)
    : params_(params), threads_(std::max(1, threads)) {
  params_.validate();
}

PrivatizedVector OheBrrOracle::randomize(std::optional<uint64_t> index,
                                         Rng& rng) const {
  return prefixhh::randomize(index, params_, rng);
}

FrequencyEstimate OheBrrOracle::estimate(const AggregateReport& agg) const {
  return prefixhh::estimate(agg, params_);
}

AggregateReport OheBrrOracle::sample_aggregate(
    const std::vector<uint32_t>& true_counts, uint64_t n,
    uint64_t seed) const {
  const uint64_t m = params_.domain_size;
  if (true_counts.size() != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample_aggregate: true_counts length mismatch");
  }
  uint64_t assigned = 0;
  for (uint32_t c : true_counts) assigned += c;
  if (assigned > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample_aggregate: counts exceed n");
  }
  AggregateReport agg;
  agg.counts.assign(m + 1, 0);
  agg.n = n;

  // counts[j] = Binom(k_j, a1) + Binom(n - k_j, a0): the exact law of the
  // coordinatewise sum of n independent randomized reports. Coordinates are
  // sampled from per-block streams so the result does not depend on how the
  // blocks are scheduled across threads.
  constexpr uint64_t kBlock = 1 << 16;
  const uint64_t total = m + 1;
  const uint64_t n_blocks = (total + kBlock - 1) / kBlock;
  auto sample_block = [&](uint64_t block) {
    Rng rng(derive_seed(seed, 0x5eedb10cULL, block));
    std::binomial_distribution<uint32_t> noise_all(static_cast<uint32_t>(n),
                                                   params_.alpha0);
    const uint64_t hi = std::min(total, (block + 1) * kBlock);
    for (uint64_t j = block * kBlock; j < hi; ++j) {
      const uint32_t k = (j < m) ? true_counts[j] : 0;
      uint32_t c = 0;
      if (k > 0) {
        std::binomial_distribution<uint32_t> hot(k, params_.alpha1);
        std::binomial_distribution<uint32_t> cold(
            static_cast<uint32_t>(n - k), params_.alpha0);
        c = hot(rng) + cold(rng);
      } else {
        c = noise_all(rng);
      }
      agg.counts[j] = c;
    }
  };

  const uint64_t workers =
      std::min<uint64_t>(static_cast<uint64_t>(threads_), n_blocks);
  if (workers <= 1) {
    for (uint64_t block = 0; block < n_blocks; ++block) sample_block(block);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<uint64_t> next{0};
    for (uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (uint64_t block = next.fetch_add(1); block < n_blocks;
             block = next.fetch_add(1)) {
          sample_block(block);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return agg;
}

OracleFactory replacement_ohe_brr_factory(int threads) {
  return [threads](double eps, uint64_t m) {
    return std::make_unique<OheBrrOracle>(OracleParams::replacement(eps, m),
                                          threads);
  };
}

OracleFactory deletion_ohe_brr_factory(int threads) {
  return [threads](double eps, uint64_t m) {
    return std::make_unique<OheBrrOracle>(OracleParams::deletion(eps, m),
                                          threads);
  };
}

}  // namespace prefixhh
