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

#include "prefixhh/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "prefixhh/accountant.hpp"
#include "prefixhh/errors.hpp"

namespace prefixhh {

namespace {
constexpr uint64_t kTagVote = 0x707e00ULL;
constexpr uint64_t kTagCentral = 0xce47a1ULL;

struct TreeState {
  RoundPlan plan;
  WordSet discovered;
  std::unordered_map<BitString, double, BitStringHash> last_estimate;
};

RoundPlan initial_plan(const TreePlan& plan_params, const WordSet& deny) {
  RoundPlan plan;
  plan.prefix_list = {BitString()};
  plan.prefix_length = 0;
  plan.segment_length = next_segment_length(
      1, 0, plan_params.dimension_limit, plan_params.word_bits);
  plan.deny_list = deny;
  plan.round_index = 1;
  return plan;
}

RunResult finalize(TreeState& state, const TreePlan& plan_params,
                   RunResult result) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto estimate_of = [&](BitString b) {
    auto it = state.last_estimate.find(b);
    return it == state.last_estimate.end() ? nan : it->second;
  };
  for (Prefix p : state.plan.prefix_list) {
    result.heavy_hitters.push_back(
        {p, HeavyHitter::Origin::kFinalPrefixList, estimate_of(p)});
  }
  for (BitString w : state.discovered) {
    result.heavy_hitters.push_back(
        {w, HeavyHitter::Origin::kDiscovered, estimate_of(w)});
  }
  for (BitString w : plan_params.deny_list) {
    result.heavy_hitters.push_back({w, HeavyHitter::Origin::kDenyList, nan});
  }
  std::sort(result.heavy_hitters.begin(), result.heavy_hitters.end(),
            [](const HeavyHitter& a, const HeavyHitter& b) {
              return a.bits < b.bits;
            });
  return result;
}

}  // namespace

void TreePlan::validate() const {
  if (rounds < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tree plan: rounds must be >= 1");
  }
  if (dimension_limit < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "tree plan: dimension_limit must be >= 2");
  }
  if (word_bits < 1 || word_bits > BitString::kMaxBits) {
    throw Error(ErrorCode::kInvalidArgument, "tree plan: bad word_bits");
  }
}

void TrieHHConfig::validate() const {
  if (theta < 1) {
    throw Error(ErrorCode::kInvalidArgument, "triehh: theta must be >= 1");
  }
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "triehh: sampling_rate must be in (0, 1]");
  }
}

void CentralNoiseConfig::validate() const {
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "central: scale must be > 0");
  }
  if (!(sensitivity > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "central: sensitivity must be > 0");
  }
}

RunResult run_triehh(const std::vector<DeviceDataset>& dataset,
                     const Codebook& cb, const TrieHHConfig& cfg,
                     const TreePlan& plan_params) {
  cfg.validate();
  plan_params.validate();
  const std::vector<DeviceDataset>* data = &dataset;
  std::vector<DeviceDataset> single;
  if (plan_params.single_datapoint) {
    single = single_datapoint_view(dataset, plan_params.seed);
    data = &single;
  }

  RunResult result;
  result.epsilon_local = std::numeric_limits<double>::infinity();  // no noise
  result.achieved_epsilon_agg = std::numeric_limits<double>::quiet_NaN();

  TreeState state;
  state.plan = initial_plan(plan_params, plan_params.deny_list);

  for (uint64_t t = 1; t <= plan_params.rounds && state.plan.segment_length > 0;
       ++t) {
    state.plan.round_index = t;
    state.plan.validate(plan_params.word_bits);
    const uint64_t m = state.plan.domain_size();
    std::vector<uint32_t> votes(m, 0);
    uint64_t participants = 0;
    for (size_t i = 0; i < data->size(); ++i) {
      Rng rng(derive_seed(plan_params.seed, kTagVote, t, i));
      if (cfg.sampling_rate < 1.0 && !rng.bernoulli(cfg.sampling_rate)) {
        continue;
      }
      ++participants;
      std::optional<EncodedWord> chosen =
          select((*data)[i], state.plan, plan_params.selection, rng);
      if (chosen) result.selected_support.insert(*chosen);
      std::optional<uint64_t> idx = selected_domain_index(chosen, state.plan);
      if (idx) ++votes[*idx];
    }

    std::vector<Prefix> kept;
    for (uint64_t idx = 0; idx < m; ++idx) {
      if (votes[idx] >= cfg.theta) {
        auto [pos, suffix] = inverse_domain_index(state.plan, idx);
        Prefix extended = state.plan.prefix_list[pos].append(suffix);
        kept.push_back(extended);
        state.last_estimate[extended] = static_cast<double>(votes[idx]);
      }
    }

    RoundStats stats;
    stats.round = t;
    stats.prefix_count = state.plan.prefix_list.size();
    stats.segment_length = state.plan.segment_length;
    stats.domain_size = m;
    stats.participants = participants;
    stats.threshold = static_cast<double>(cfg.theta);
    stats.kept = kept.size();
    result.per_round.push_back(stats);

    auto [remaining, discovered] = remove_finished(kept, cb, state.discovered);
    state.discovered = std::move(discovered);
    state.plan.prefix_list = std::move(remaining);
    state.plan.prefix_length += state.plan.segment_length;
    if (state.plan.prefix_list.empty()) break;
    state.plan.segment_length = next_segment_length(
        state.plan.prefix_list.size(), state.plan.prefix_length,
        plan_params.dimension_limit, plan_params.word_bits);
  }
  return finalize(state, plan_params, std::move(result));
}

RunResult run_central(const std::vector<DeviceDataset>& dataset,
                      const Codebook& cb, const CentralNoiseConfig& cfg,
                      const TreePlan& plan_params) {
  cfg.validate();
  plan_params.validate();
  plan_params.prune.validate();
  const std::vector<DeviceDataset>* data = &dataset;
  std::vector<DeviceDataset> single;
  if (plan_params.single_datapoint) {
    single = single_datapoint_view(dataset, plan_params.seed);
    data = &single;
  }

  RunResult result;
  result.epsilon_local = std::numeric_limits<double>::quiet_NaN();
  result.achieved_epsilon_agg = std::numeric_limits<double>::quiet_NaN();

  const double noise_std = cfg.noise == CentralNoiseConfig::Noise::kLaplace
                               ? cfg.scale * std::sqrt(2.0)
                               : cfg.scale;

  TreeState state;
  state.plan = initial_plan(plan_params, plan_params.deny_list);

  for (uint64_t t = 1; t <= plan_params.rounds && state.plan.segment_length > 0;
       ++t) {
    state.plan.round_index = t;
    state.plan.validate(plan_params.word_bits);
    const uint64_t m = state.plan.domain_size();
    std::vector<uint32_t> hist(m, 0);
    for (size_t i = 0; i < data->size(); ++i) {
      Rng rng(derive_seed(plan_params.seed, kTagVote, t, i));
      std::optional<EncodedWord> chosen =
          select((*data)[i], state.plan, plan_params.selection, rng);
      if (chosen) result.selected_support.insert(*chosen);
      std::optional<uint64_t> idx = selected_domain_index(chosen, state.plan);
      if (idx) ++hist[*idx];
    }

    FrequencyEstimate est;
    est.sigma = noise_std;
    est.f_tilde.resize(m);
    constexpr uint64_t kBlock = 1 << 16;
    for (uint64_t block = 0; block * kBlock < m; ++block) {
      Rng rng(derive_seed(plan_params.seed, kTagCentral, t, block));
      std::normal_distribution<double> gauss(0.0, cfg.scale);
      const uint64_t hi = std::min<uint64_t>(m, (block + 1) * kBlock);
      for (uint64_t j = block * kBlock; j < hi; ++j) {
        double noise;
        if (cfg.noise == CentralNoiseConfig::Noise::kLaplace) {
          const double u = rng.uniform() - 0.5;
          noise = -cfg.scale * std::copysign(std::log1p(-2.0 * std::abs(u)),
                                             u);
        } else {
          noise = gauss(rng);
        }
        est.f_tilde[j] = static_cast<double>(hist[j]) + noise;
      }
    }

    PruneResult pruned = prune(est, m, plan_params.prune);
    std::vector<Prefix> kept;
    kept.reserve(pruned.kept.size());
    uint64_t fp = 0;
    for (uint64_t idx : pruned.kept) {
      auto [pos, suffix] = inverse_domain_index(state.plan, idx);
      Prefix extended = state.plan.prefix_list[pos].append(suffix);
      kept.push_back(extended);
      state.last_estimate[extended] = est.f_tilde[idx];
      if (hist[idx] == 0) ++fp;
    }

    RoundStats stats;
    stats.round = t;
    stats.prefix_count = state.plan.prefix_list.size();
    stats.segment_length = state.plan.segment_length;
    stats.domain_size = m;
    stats.participants = data->size();
    stats.sigma = noise_std;
    stats.tau_final = pruned.tau_final;
    stats.threshold = pruned.tau_final * noise_std;
    stats.kept = kept.size();
    stats.empirical_fp = fp;
    result.per_round.push_back(stats);

    auto [remaining, discovered] = remove_finished(kept, cb, state.discovered);
    state.discovered = std::move(discovered);
    state.plan.prefix_list = std::move(remaining);
    state.plan.prefix_length += state.plan.segment_length;
    if (state.plan.prefix_list.empty()) break;
    state.plan.segment_length = next_segment_length(
        state.plan.prefix_list.size(), state.plan.prefix_length,
        plan_params.dimension_limit, plan_params.word_bits);
  }
  return finalize(state, plan_params, std::move(result));
}

double triehhpp_sampling_rate(double epsilon_round, uint64_t theta,
                              double delta) {
  if (!(epsilon_round > 0.0 && epsilon_round < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "triehhpp: round epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "triehhpp: delta must be in (0, 1)");
  }
  if (theta < 1) {
    throw Error(ErrorCode::kInvalidArgument, "triehhpp: theta must be >= 1");
  }
  // C_alpha = ln(1/alpha) - 1/(1+alpha) is strictly decreasing on (0, 1], so
  // e^{-C_alpha * theta} is strictly increasing; bisect for the target delta.
  const double target_c = std::log(1.0 / delta) / static_cast<double>(theta);
  const auto c_of = [](double alpha) {
    return std::log(1.0 / alpha) - 1.0 / (1.0 + alpha);
  };
  double lo = 1e-18, hi = 1.0;
  if (c_of(hi) > target_c) {
    throw Error(ErrorCode::kInfeasibleTheta,
                "triehhpp: no alpha in (0, 1] matches delta");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (c_of(mid) > target_c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double alpha = 0.5 * (lo + hi);
  return alpha * (1.0 - std::exp(-epsilon_round));
}

double invert_compose_advanced(double epsilon_agg, uint64_t rounds,
                               double delta_slack) {
  if (!(epsilon_agg > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invert_compose_advanced: epsilon_agg must be > 0");
  }
  const auto total = [&](double eps) {
    return compose_advanced(eps, 0.0, rounds, delta_slack).first;
  };
  double lo = 0.0, hi = epsilon_agg;  // linear branch caps at T*eps
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) <= epsilon_agg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

TrieHHppDerivation derive_triehhpp_rate(double epsilon_agg, double delta,
                                        uint64_t rounds, uint64_t theta) {
  TrieHHppDerivation out;
  out.epsilon_round =
      invert_compose_advanced(epsilon_agg, rounds, delta / 2.0);
  out.sampling_rate =
      triehhpp_sampling_rate(out.epsilon_round, theta, delta / 2.0);
  out.alpha = out.sampling_rate / (1.0 - std::exp(-out.epsilon_round));
  return out;
}

double gaussian_tree_epsilon(double sigma, double l2_sensitivity,
                             uint64_t rounds, double delta) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "gaussian_tree_epsilon: sigma must be > 0");
  }
  const double log_inv_delta = std::log(1.0 / delta);
  double best = std::numeric_limits<double>::infinity();
  for (double alpha = 1.125; alpha <= 4096.0; alpha *= 1.03125) {
    const double renyi = static_cast<double>(rounds) * alpha *
                         l2_sensitivity * l2_sensitivity /
                         (2.0 * sigma * sigma);
    best = std::min(best, renyi + log_inv_delta / (alpha - 1.0));
  }
  return best;
}

double central_gaussian_sigma(double epsilon_agg, double delta,
                              uint64_t rounds, double l2_sensitivity) {
  double lo = 1e-6, hi = 1e-6;
  while (gaussian_tree_epsilon(hi, l2_sensitivity, rounds, delta) >
         epsilon_agg) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw Error(ErrorCode::kBudgetTooTight,
                  "central_gaussian_sigma: cannot meet the budget");
    }
  }
  lo = hi / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_tree_epsilon(mid, l2_sensitivity, rounds, delta) <=
        epsilon_agg) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double central_laplace_scale(double epsilon_agg, double delta, uint64_t rounds,
                             double l1_sensitivity) {
  const double eps_round =
      invert_compose_advanced(epsilon_agg, rounds, delta);
  return l1_sensitivity / eps_round;
}

}  // namespace prefixhh
