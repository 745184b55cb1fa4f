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

#ifndef PREFIXHH_ENGINE_HPP
#define PREFIXHH_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "prefixhh/accountant.hpp"
#include "prefixhh/device.hpp"
#include "prefixhh/freq_oracle.hpp"
#include "prefixhh/server.hpp"

namespace prefixhh {

struct RunConfig {
  uint64_t rounds = 4;              // T
  uint64_t dimension_limit = 1000000;  // P, cap on |X_t| * 2^{s_t}
  int word_bits = 60;               // r
  PrivacyBudget budget;
  // When set, skips the accountant and uses this local epsilon per round.
  std::optional<double> epsilon_local_override;
  PruneConfig prune;
  SelectionPolicy selection;
  WordSet deny_list;
  enum class Mode { kMultiDatapoint, kSingleDatapoint };
  Mode mode = Mode::kMultiDatapoint;
  uint64_t seed = 0;
  // Local randomizer/estimator pair; replacement OHE-BRR when unset.
  OracleFactory oracle_factory;
  int threads = 1;
  // Uniform-segmentation variant: every round requests this many new bits
  // (capped by the remaining word length) instead of adapting to the prefix
  // count. Unset means adaptive.
  std::optional<int> fixed_segment_length;

  void validate() const;
};

struct RoundStats {
  uint64_t round = 0;
  uint64_t prefix_count = 0;  // |X_t|
  int segment_length = 0;     // s_t
  uint64_t domain_size = 0;   // |X_t| * 2^{s_t}
  uint64_t participants = 0;
  double sigma = 0.0;
  double tau_final = 0.0;
  double threshold = 0.0;  // tau_final * sigma
  uint64_t kept = 0;
  uint64_t empirical_fp = 0;  // kept bins with zero true selected count
};

struct HeavyHitter {
  enum class Origin { kFinalPrefixList, kDiscovered, kDenyList };
  BitString bits;
  Origin origin = Origin::kFinalPrefixList;
  // Debiased estimate from the last round that kept this element; NaN for
  // deny-list entries.
  double last_estimate = 0.0;
};

struct RunResult {
  std::vector<HeavyHitter> heavy_hitters;  // sorted by bits, deduplicated
  std::vector<RoundStats> per_round;
  double epsilon_local = 0.0;
  double achieved_epsilon_agg = 0.0;
  // Words chosen by at least one device in some round (pre-noise).
  WordSet selected_support;

  std::vector<BitString> output_bits() const;
};

// Draws one word per device from its local distribution; the draw stays
// fixed across rounds.
std::vector<DeviceDataset> single_datapoint_view(
    const std::vector<DeviceDataset>& dataset, uint64_t seed);

// Seed a chained invocation (run_two_rounds) uses for its k-th run.
uint64_t chained_run_seed(uint64_t seed, uint64_t run_index);

// T rounds of plan -> device reports -> exact-sum aggregation -> estimate ->
// prune -> completed-word extraction -> next segment length. Stops early on
// an empty prefix list or a zero segment length. Output is the final prefix
// list plus the deny list plus everything discovered along the way.
RunResult run(const std::vector<DeviceDataset>& dataset, const Codebook& cb,
              const RunConfig& cfg);

// Runs twice with the budget spread over 2T rounds; the first run's output
// words are added to the second run's deny list and both discoveries merge.
RunResult run_two_rounds(const std::vector<DeviceDataset>& dataset,
                         const Codebook& cb, const RunConfig& cfg);

}  // namespace prefixhh

#endif  // PREFIXHH_ENGINE_HPP
