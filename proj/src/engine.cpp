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

#include "prefixhh/engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "prefixhh/errors.hpp"

namespace prefixhh {

namespace {

// Stream tags; distinct per use so derived streams never collide.
constexpr uint64_t kTagDevice = 0xdec1ce00ULL;
constexpr uint64_t kTagAggregate = 0xa6600ULL;
constexpr uint64_t kTagSingle = 0x51461eULL;
constexpr uint64_t kTagChainedRun = 0xc4a1aedULL;

struct RoundOutcome {
  double sigma = 0.0;
  PruneResult pruned;
  uint64_t participants = 0;
  uint64_t empirical_fp = 0;
  std::vector<std::pair<Prefix, double>> kept_estimates;  // sorted by prefix
};

RoundOutcome run_round(const std::vector<DeviceDataset>& dataset,
                       const RunConfig& cfg, const RoundPlan& plan,
                       double epsilon_local, WordSet& selected_support) {
  const uint64_t m = plan.domain_size();
  OracleFactory factory = cfg.oracle_factory
                              ? cfg.oracle_factory
                              : replacement_ohe_brr_factory(cfg.threads);
  auto oracle = factory(epsilon_local, m);

  std::vector<uint32_t> true_counts(m, 0);
  uint64_t participants = 0;
  const double gamma = cfg.budget.sampling_rate;
  for (size_t i = 0; i < dataset.size(); ++i) {
    Rng rng(derive_seed(cfg.seed, kTagDevice, plan.round_index, i));
    if (gamma < 1.0 && !rng.bernoulli(gamma)) continue;
    ++participants;
    std::optional<EncodedWord> chosen =
        select(dataset[i], plan, cfg.selection, rng);
    if (chosen) selected_support.insert(*chosen);
    std::optional<uint64_t> idx = selected_domain_index(chosen, plan);
    if (idx) ++true_counts[*idx];
  }

  RoundOutcome out;
  out.participants = participants;
  if (participants == 0) return out;

  AggregateReport agg = oracle->sample_aggregate(
      true_counts, participants,
      derive_seed(cfg.seed, kTagAggregate, plan.round_index));
  FrequencyEstimate est = oracle->estimate(agg);
  out.sigma = est.sigma;
  out.pruned = prune(est, m, cfg.prune);

  out.kept_estimates.reserve(out.pruned.kept.size());
  for (uint64_t idx : out.pruned.kept) {
    auto [pos, suffix] = inverse_domain_index(plan, idx);
    out.kept_estimates.emplace_back(plan.prefix_list[pos].append(suffix),
                                    est.f_tilde[idx]);
    if (true_counts[idx] == 0) ++out.empirical_fp;
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (rounds < 1) {
    throw Error(ErrorCode::kInvalidArgument, "run config: rounds must be >= 1");
  }
  if (dimension_limit < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "run config: dimension_limit must be >= 2");
  }
  if (word_bits < 1 || word_bits > BitString::kMaxBits) {
    throw Error(ErrorCode::kInvalidArgument, "run config: bad word_bits");
  }
  if (epsilon_local_override && !(*epsilon_local_override > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "run config: epsilon_local_override must be > 0");
  }
  if (fixed_segment_length && *fixed_segment_length < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "run config: fixed_segment_length must be >= 1");
  }
  prune.validate();
}

std::vector<BitString> RunResult::output_bits() const {
  std::vector<BitString> out;
  out.reserve(heavy_hitters.size());
  for (const HeavyHitter& h : heavy_hitters) out.push_back(h.bits);
  return out;
}

uint64_t chained_run_seed(uint64_t seed, uint64_t run_index) {
  return derive_seed(seed, kTagChainedRun, run_index);
}

std::vector<DeviceDataset> single_datapoint_view(
    const std::vector<DeviceDataset>& dataset, uint64_t seed) {
  std::vector<DeviceDataset> out;
  out.reserve(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    DeviceDataset one;
    if (!dataset[i].words.empty()) {
      Rng rng(derive_seed(seed, kTagSingle, i));
      uint64_t pick = rng.below(dataset[i].total_count());
      for (const auto& e : dataset[i].words) {
        if (pick < e.count) {
          one.add(e.word, 1);
          break;
        }
        pick -= e.count;
      }
    }
    out.push_back(std::move(one));
  }
  return out;
}

namespace {
int plan_segment_length(const RunConfig& cfg, uint64_t prefix_count,
                        int prefix_length) {
  if (cfg.fixed_segment_length) {
    if (prefix_count == 0) return 0;
    return std::min(*cfg.fixed_segment_length,
                    cfg.word_bits - prefix_length);
  }
  return next_segment_length(prefix_count, prefix_length, cfg.dimension_limit,
                             cfg.word_bits);
}

// Fixed segment lengths cannot adapt to the prefix count, so the list is
// truncated to the heaviest prefixes that still fit the dimension limit.
void fit_prefix_list(const RunConfig& cfg, int segment_length,
                     std::vector<Prefix>& prefixes,
                     const std::unordered_map<BitString, double,
                                              BitStringHash>& estimates) {
  if (!cfg.fixed_segment_length || segment_length <= 0) return;
  const uint64_t max_prefixes = cfg.dimension_limit >> segment_length;
  if (max_prefixes == 0) {
    throw Error(ErrorCode::kPrefixListTooLarge,
                "fixed segment length exceeds the dimension limit");
  }
  if (prefixes.size() <= max_prefixes) return;
  std::vector<Prefix> by_weight = prefixes;
  std::sort(by_weight.begin(), by_weight.end(), [&](Prefix a, Prefix b) {
    const double ea = estimates.at(a);
    const double eb = estimates.at(b);
    if (ea != eb) return ea > eb;
    return a < b;
  });
  by_weight.resize(max_prefixes);
  std::sort(by_weight.begin(), by_weight.end());
  prefixes = std::move(by_weight);
}
}  // namespace

RunResult run(const std::vector<DeviceDataset>& dataset, const Codebook& cb,
              const RunConfig& cfg) {
  cfg.validate();
  if (!(cfg.budget.sampling_rate > 0.0 && cfg.budget.sampling_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "run config: sampling_rate must be in (0, 1]");
  }
  const std::vector<DeviceDataset>* data = &dataset;
  std::vector<DeviceDataset> single;
  if (cfg.mode == RunConfig::Mode::kSingleDatapoint) {
    single = single_datapoint_view(dataset, cfg.seed);
    data = &single;
  }

  RunResult result;
  if (cfg.epsilon_local_override) {
    result.epsilon_local = *cfg.epsilon_local_override;
    result.achieved_epsilon_agg = std::numeric_limits<double>::quiet_NaN();
  } else {
    PrivacyBudget budget = cfg.budget;
    budget.rounds = cfg.rounds;
    AccountantResult acc = solve_local_epsilon(budget);
    result.epsilon_local = acc.epsilon_local;
    result.achieved_epsilon_agg = acc.achieved_epsilon_agg;
  }

  RoundPlan plan;
  plan.prefix_list = {BitString()};
  plan.prefix_length = 0;
  plan.segment_length = plan_segment_length(cfg, 1, 0);
  plan.deny_list = cfg.deny_list;

  WordSet discovered;
  std::unordered_map<BitString, double, BitStringHash> last_estimate;

  for (uint64_t t = 1; t <= cfg.rounds && plan.segment_length > 0; ++t) {
    plan.round_index = t;
    plan.validate(cfg.word_bits);
    RoundStats stats;
    stats.round = t;
    stats.prefix_count = plan.prefix_list.size();
    stats.segment_length = plan.segment_length;
    stats.domain_size = plan.domain_size();

    RoundOutcome outcome;
    try {
      outcome = run_round(*data, cfg, plan, result.epsilon_local,
                          result.selected_support);
    } catch (const Error& e) {
      throw Error(e.code(), "round " + std::to_string(t) + ": " + e.what());
    }

    stats.participants = outcome.participants;
    stats.sigma = outcome.sigma;
    stats.tau_final = outcome.pruned.tau_final;
    stats.threshold = outcome.pruned.tau_final * outcome.sigma;
    stats.kept = outcome.pruned.kept.size();
    stats.empirical_fp = outcome.empirical_fp;
    result.per_round.push_back(stats);

    std::vector<Prefix> kept;
    kept.reserve(outcome.kept_estimates.size());
    for (const auto& [prefix, estimate] : outcome.kept_estimates) {
      last_estimate[prefix] = estimate;
      kept.push_back(prefix);
    }

    auto [remaining, now_discovered] = remove_finished(kept, cb, discovered);
    discovered = std::move(now_discovered);

    plan.prefix_list = std::move(remaining);
    plan.prefix_length += plan.segment_length;
    if (plan.prefix_list.empty()) break;
    int next_s;
    try {
      next_s = plan_segment_length(cfg, plan.prefix_list.size(),
                                   plan.prefix_length);
      fit_prefix_list(cfg, next_s, plan.prefix_list, last_estimate);
    } catch (const Error& e) {
      throw Error(e.code(), "after round " + std::to_string(t) + ": " +
                                std::string(e.what()));
    }
    plan.segment_length = next_s;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto estimate_of = [&](BitString b) {
    auto it = last_estimate.find(b);
    return it == last_estimate.end() ? nan : it->second;
  };
  for (Prefix p : plan.prefix_list) {
    result.heavy_hitters.push_back(
        {p, HeavyHitter::Origin::kFinalPrefixList, estimate_of(p)});
  }
  for (BitString w : discovered) {
    result.heavy_hitters.push_back(
        {w, HeavyHitter::Origin::kDiscovered, estimate_of(w)});
  }
  for (BitString w : cfg.deny_list) {
    result.heavy_hitters.push_back({w, HeavyHitter::Origin::kDenyList, nan});
  }
  std::sort(result.heavy_hitters.begin(), result.heavy_hitters.end(),
            [](const HeavyHitter& a, const HeavyHitter& b) {
              return a.bits < b.bits;
            });
  return result;
}

RunResult run_two_rounds(const std::vector<DeviceDataset>& dataset,
                         const Codebook& cb, const RunConfig& cfg) {
  cfg.validate();
  RunConfig base = cfg;
  double achieved = std::numeric_limits<double>::quiet_NaN();
  if (!cfg.epsilon_local_override) {
    PrivacyBudget budget = cfg.budget;
    budget.rounds = 2 * cfg.rounds;
    AccountantResult acc = solve_local_epsilon(budget);
    base.epsilon_local_override = acc.epsilon_local;
    achieved = acc.achieved_epsilon_agg;
  }

  RunConfig first = base;
  first.seed = chained_run_seed(cfg.seed, 1);
  RunResult r1 = run(dataset, cb, first);

  RunConfig second = base;
  second.seed = chained_run_seed(cfg.seed, 2);
  second.deny_list = cfg.deny_list;
  for (const HeavyHitter& h : r1.heavy_hitters) {
    second.deny_list.insert(h.bits.zero_extend(cfg.word_bits));
  }
  RunResult r2 = run(dataset, cb, second);

  RunResult merged;
  merged.epsilon_local = *base.epsilon_local_override;
  merged.achieved_epsilon_agg = achieved;
  merged.per_round = r1.per_round;
  merged.per_round.insert(merged.per_round.end(), r2.per_round.begin(),
                          r2.per_round.end());
  merged.selected_support = r1.selected_support;
  for (BitString w : r2.selected_support) merged.selected_support.insert(w);

  WordSet seen;
  auto add = [&](const HeavyHitter& h, bool from_second) {
    // The second run denies the first run's output; report those under
    // their first-run origin rather than as deny-list entries.
    if (from_second && h.origin == HeavyHitter::Origin::kDenyList &&
        !cfg.deny_list.count(h.bits)) {
      return;
    }
    if (seen.insert(h.bits).second) merged.heavy_hitters.push_back(h);
  };
  for (const HeavyHitter& h : r1.heavy_hitters) add(h, false);
  for (const HeavyHitter& h : r2.heavy_hitters) add(h, true);
  std::sort(merged.heavy_hitters.begin(), merged.heavy_hitters.end(),
            [](const HeavyHitter& a, const HeavyHitter& b) {
              return a.bits < b.bits;
            });
  return merged;
}

}  // namespace prefixhh
