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

#include "prefixhh/device.hpp"

#include <algorithm>

#include "prefixhh/errors.hpp"

namespace prefixhh {

void DeviceDataset::add(EncodedWord word, uint32_t count) {
  if (count == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "device dataset: count must be positive");
  }
  auto it = std::lower_bound(
      words.begin(), words.end(), word,
      [](const Entry& e, EncodedWord w) { return e.word < w; });
  if (it != words.end() && it->word == word) {
    it->count += count;
  } else {
    words.insert(it, Entry{word, count});
  }
}

std::vector<DeviceDataset::Entry> eligible(const DeviceDataset& data,
                                           const RoundPlan& plan,
                                           bool condition_on_prefix_list) {
  std::vector<DeviceDataset::Entry> out;
  // A zero-length prefix matches everything (the empty-prefix first round).
  const bool prefix_filter = condition_on_prefix_list && plan.prefix_length > 0;
  for (const DeviceDataset::Entry& e : data.words) {
    if (plan.deny_list.count(e.word)) continue;
    if (prefix_filter &&
        !std::binary_search(plan.prefix_list.begin(), plan.prefix_list.end(),
                            e.word.prefix(plan.prefix_length))) {
      continue;
    }
    out.push_back(e);
  }
  return out;
}

std::optional<EncodedWord> select(const DeviceDataset& data,
                                  const RoundPlan& plan,
                                  const SelectionPolicy& policy, Rng& rng) {
  std::vector<DeviceDataset::Entry> pool =
      eligible(data, plan, policy.condition_on_prefix_list);
  if (pool.empty()) return std::nullopt;
  if (policy.kind == SelectionPolicy::Kind::kUnweighted) {
    return pool[rng.below(pool.size())].word;
  }
  uint64_t total = 0;
  for (const auto& e : pool) total += e.count;
  uint64_t pick = rng.below(total);
  for (const auto& e : pool) {
    if (pick < e.count) return e.word;
    pick -= e.count;
  }
  return pool.back().word;  // unreachable
}

std::optional<uint64_t> selected_domain_index(
    std::optional<EncodedWord> selected, const RoundPlan& plan) {
  if (!selected) return std::nullopt;
  const int pre = plan.prefix_length;
  const int s = plan.segment_length;
  if (plan.prefix_list.empty()) {
    // Empty-prefix round broadcast without an explicit prefix entry.
    if (pre != 0) return std::nullopt;
    return selected->substr(0, s).value();
  }
  Prefix p = selected->prefix(pre);
  auto it =
      std::lower_bound(plan.prefix_list.begin(), plan.prefix_list.end(), p);
  if (it == plan.prefix_list.end() || *it != p) return std::nullopt;
  const uint64_t pos = static_cast<uint64_t>(it - plan.prefix_list.begin());
  return domain_index(plan, pos, selected->substr(pre, s));
}

PrivatizedVector report(const DeviceDataset& data, const RoundPlan& plan,
                        const SelectionPolicy& policy,
                        const FrequencyOracle& oracle, Rng& rng) {
  std::optional<EncodedWord> chosen = select(data, plan, policy, rng);
  return oracle.randomize(selected_domain_index(chosen, plan), rng);
}

}  // namespace prefixhh
