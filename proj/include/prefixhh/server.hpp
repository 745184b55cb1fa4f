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

#ifndef PREFIXHH_SERVER_HPP
#define PREFIXHH_SERVER_HPP

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prefixhh/bitstring.hpp"
#include "prefixhh/codebook.hpp"
#include "prefixhh/freq_oracle.hpp"

namespace prefixhh {

using WordSet = std::unordered_set<BitString, BitStringHash>;

// Per-round broadcast: live prefixes (sorted, all the same length), the
// number of new bits to request, and the deny list.
struct RoundPlan {
  std::vector<Prefix> prefix_list;
  int prefix_length = 0;
  int segment_length = 0;
  WordSet deny_list;
  uint64_t round_index = 1;

  uint64_t domain_size() const {
    return static_cast<uint64_t>(prefix_list.size()) << segment_length;
  }
  void validate(int r) const;
};

struct PruneConfig {
  double tau0 = 2.0;     // initial threshold multiplier
  double f_ratio = 0.5;  // target expected-false-positive / kept ratio
  double eta = 0.9;      // geometric decay of the tail mass E
  double e_floor = 1e-12;

  void validate() const;
};

struct PruneResult {
  std::vector<uint64_t> kept;  // indices into the round domain
  double tau_final = 0.0;
  double e_final = 0.0;
};

// Bijection between (prefix position, suffix bits) and [0, |X| * 2^s).
uint64_t domain_index(const RoundPlan& plan, uint64_t prefix_position,
                      BitString suffix_bits);
std::pair<uint64_t, BitString> inverse_domain_index(const RoundPlan& plan,
                                                    uint64_t index);

// Threshold-selection loop: start at tau0, shrink the modeled tail mass E
// geometrically until the expected number of noise-only bins above tau*sigma
// is at most f_ratio times the kept count. Empty kept and E < e_floor are
// terminal.
PruneResult prune(const FrequencyEstimate& estimates, uint64_t domain_size,
                  const PruneConfig& cfg);

// Moves prefixes that decode to a completed data point into discovered.
std::pair<std::vector<Prefix>, WordSet> remove_finished(
    const std::vector<Prefix>& kept_prefixes, const Codebook& cb,
    WordSet discovered);

// Largest l with prefix_count * 2^l <= dimension_limit, capped at
// r - prefix_length. Zero prefix_count signals termination (returns 0).
// Throws Error{kPrefixListTooLarge} when even l = 0 violates the limit.
int next_segment_length(uint64_t prefix_count, int prefix_length,
                        uint64_t dimension_limit, int r);

}  // namespace prefixhh

#endif  // PREFIXHH_SERVER_HPP
