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

#ifndef PREFIXHH_DEVICE_HPP
#define PREFIXHH_DEVICE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "prefixhh/bitstring.hpp"
#include "prefixhh/freq_oracle.hpp"
#include "prefixhh/rng.hpp"
#include "prefixhh/server.hpp"

namespace prefixhh {

// One device's local multiset of encoded words. Entries are distinct words
// with positive multiplicities, kept sorted so iteration is deterministic.
struct DeviceDataset {
  struct Entry {
    EncodedWord word;
    uint32_t count = 0;
  };
  std::vector<Entry> words;

  uint64_t total_count() const {
    uint64_t t = 0;
    for (const Entry& e : words) t += e.count;
    return t;
  }
  void add(EncodedWord word, uint32_t count);
};

struct SelectionPolicy {
  enum class Kind { kWeighted, kUnweighted };
  Kind kind = Kind::kUnweighted;
  bool condition_on_prefix_list = true;
};

// Words whose leading prefix_length bits are in the plan's prefix list and
// which are not denied. A zero-length prefix filter is vacuous. When
// condition_on_prefix_list is false only the deny filter applies.
std::vector<DeviceDataset::Entry> eligible(const DeviceDataset& data,
                                           const RoundPlan& plan,
                                           bool condition_on_prefix_list = true);

// One data point for this round, or kBot-style nullopt when nothing is
// eligible. Weighted selection samples by local multiplicity; unweighted
// samples uniformly over distinct eligible words.
std::optional<EncodedWord> select(const DeviceDataset& data,
                                  const RoundPlan& plan,
                                  const SelectionPolicy& policy, Rng& rng);

// Full device step: select, map the (prefix_length + s_t)-bit prefix of the
// chosen word to its round-domain index, and privatize it. Words whose
// prefix is not in the plan (possible under unconditioned selection) report
// bottom.
PrivatizedVector report(const DeviceDataset& data, const RoundPlan& plan,
                        const SelectionPolicy& policy,
                        const FrequencyOracle& oracle, Rng& rng);

// The index report() would privatize; nullopt means bottom. Shared with the
// engine so aggregate sampling sees exactly the per-device semantics.
std::optional<uint64_t> selected_domain_index(
    std::optional<EncodedWord> selected, const RoundPlan& plan);

}  // namespace prefixhh

#endif  // PREFIXHH_DEVICE_HPP
