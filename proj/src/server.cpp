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

#include "prefixhh/server.hpp"

#include <algorithm>
#include <cmath>

#include "prefixhh/errors.hpp"
#include "prefixhh/stats.hpp"

namespace prefixhh {

void RoundPlan::validate(int r) const {
  if (prefix_length + segment_length > r) {
    throw Error(ErrorCode::kInvalidArgument,
                "round plan: prefix + segment exceeds word length");
  }
  for (size_t i = 0; i < prefix_list.size(); ++i) {
    if (prefix_list[i].length() != prefix_length) {
      throw Error(ErrorCode::kInvalidArgument,
                  "round plan: prefix length mismatch");
    }
    if (i > 0 && !(prefix_list[i - 1] < prefix_list[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "round plan: prefixes must be sorted and distinct");
    }
  }
}

void PruneConfig::validate() const {
  if (!(tau0 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "prune config: tau0 must be > 0");
  }
  if (!(eta > 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "prune config: eta must be in (0, 1)");
  }
  if (!(f_ratio > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "prune config: f_ratio must be > 0");
  }
  if (!(e_floor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "prune config: e_floor must be > 0");
  }
}

uint64_t domain_index(const RoundPlan& plan, uint64_t prefix_position,
                      BitString suffix_bits) {
  if (prefix_position >= plan.prefix_list.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "domain_index: prefix position out of range");
  }
  if (suffix_bits.length() != plan.segment_length) {
    throw Error(ErrorCode::kInvalidArgument,
                "domain_index: suffix length mismatch");
  }
  return (prefix_position << plan.segment_length) | suffix_bits.value();
}

std::pair<uint64_t, BitString> inverse_domain_index(const RoundPlan& plan,
                                                    uint64_t index) {
  if (index >= plan.domain_size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "inverse_domain_index: index out of range");
  }
  const uint64_t pos = index >> plan.segment_length;
  const uint64_t mask = (plan.segment_length == 64)
                            ? ~0ULL
                            : ((1ULL << plan.segment_length) - 1);
  return {pos, BitString(index & mask, plan.segment_length)};
}

PruneResult prune(const FrequencyEstimate& estimates, uint64_t domain_size,
                  const PruneConfig& cfg) {
  cfg.validate();
  if (domain_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "prune: domain_size must be >= 1");
  }
  const double sigma = estimates.sigma;
  const auto collect = [&](double tau) {
    std::vector<uint64_t> kept;
    const double cut = tau * sigma;
    for (size_t d = 0; d < estimates.f_tilde.size(); ++d) {
      if (estimates.f_tilde[d] > cut) kept.push_back(d);
    }
    return kept;
  };

  double e = std_normal_sf(cfg.tau0);
  double tau = cfg.tau0;
  std::vector<uint64_t> kept = collect(tau);
  const double dom = static_cast<double>(domain_size);
  while (!kept.empty() &&
         cfg.f_ratio < e * dom / static_cast<double>(kept.size())) {
    const double next_e = cfg.eta * e;
    if (next_e < cfg.e_floor) break;
    e = next_e;
    tau = std_normal_quantile(1.0 - e);
    kept = collect(tau);
  }
  return {std::move(kept), tau, e};
}

std::pair<std::vector<Prefix>, WordSet> remove_finished(
    const std::vector<Prefix>& kept_prefixes, const Codebook& cb,
    WordSet discovered) {
  std::vector<Prefix> remaining;
  remaining.reserve(kept_prefixes.size());
  for (Prefix p : kept_prefixes) {
    if (is_complete(p, cb)) {
      discovered.insert(p);
    } else {
      remaining.push_back(p);
    }
  }
  return {std::move(remaining), std::move(discovered)};
}

int next_segment_length(uint64_t prefix_count, int prefix_length,
                        uint64_t dimension_limit, int r) {
  if (prefix_count == 0) return 0;
  if (prefix_count > dimension_limit) {
    throw Error(ErrorCode::kPrefixListTooLarge,
                "next_segment_length: prefix list of " +
                    std::to_string(prefix_count) +
                    " exceeds the dimension limit " +
                    std::to_string(dimension_limit));
  }
  int l = 0;
  while (l < 63 && (prefix_count << (l + 1)) >> (l + 1) == prefix_count &&
         (prefix_count << (l + 1)) <= dimension_limit) {
    ++l;
  }
  return std::min(l, r - prefix_length);
}

}  // namespace prefixhh
