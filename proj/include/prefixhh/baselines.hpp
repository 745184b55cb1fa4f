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

#ifndef PREFIXHH_BASELINES_HPP
#define PREFIXHH_BASELINES_HPP

#include <cstdint>

#include "prefixhh/engine.hpp"

namespace prefixhh {

// Shared tree-walk parameters for the baseline algorithms.
struct TreePlan {
  uint64_t rounds = 1;
  uint64_t dimension_limit = 1000000;
  int word_bits = 60;
  SelectionPolicy selection;
  WordSet deny_list;
  bool single_datapoint = false;
  uint64_t seed = 0;
  PruneConfig prune;  // central-noise trees only

  void validate() const;
};

struct TrieHHConfig {
  uint64_t theta = 10;        // clear-vote survival threshold
  double sampling_rate = 1.0;  // per-device Bernoulli participation
  void validate() const;
};

struct CentralNoiseConfig {
  enum class Noise { kLaplace, kGaussian };
  Noise noise = Noise::kGaussian;
  double scale = 1.0;        // Laplace b or Gaussian sigma
  double sensitivity = 2.0;  // informational; calibration happens up front
  void validate() const;
};

// Sampled clear-vote prefix tree: participants vote their extended prefix
// without local noise; prefixes with at least theta votes survive.
RunResult run_triehh(const std::vector<DeviceDataset>& dataset,
                     const Codebook& cb, const TrieHHConfig& cfg,
                     const TreePlan& plan);

// Trusted-curator tree: exact per-round histogram plus i.i.d. Laplace or
// Gaussian noise per coordinate, then the usual prune.
RunResult run_central(const std::vector<DeviceDataset>& dataset,
                      const Codebook& cb, const CentralNoiseConfig& cfg,
                      const TreePlan& plan);

// Sampling rate p_s = alpha (1 - e^-eps_round) where alpha in (0, 1] solves
// e^{-C_alpha theta} = delta with C_alpha = ln(1/alpha) - 1/(1+alpha).
// Requires eps_round < 1.
double triehhpp_sampling_rate(double epsilon_round, uint64_t theta,
                              double delta);

// Largest per-round epsilon whose advanced composition over `rounds` stays
// within eps_agg, with delta_slack as the composition slack.
double invert_compose_advanced(double epsilon_agg, uint64_t rounds,
                               double delta_slack);

struct TrieHHppDerivation {
  double epsilon_round = 0.0;
  double alpha = 0.0;
  double sampling_rate = 0.0;
};

// Full TrieHH++ rate derivation for an aggregate budget: half of delta goes
// to the sampling mechanism's failure mass, half to composition slack.
TrieHHppDerivation derive_triehhpp_rate(double epsilon_agg, double delta,
                                        uint64_t rounds, uint64_t theta);

// (eps, delta) cost of T Gaussian releases at noise sigma, minimized over
// Renyi orders: min_a [T a l2^2 / (2 sigma^2) + ln(1/delta)/(a - 1)].
double gaussian_tree_epsilon(double sigma, double l2_sensitivity,
                             uint64_t rounds, double delta);

// Smallest sigma meeting the (eps_agg, delta) target over T rounds.
double central_gaussian_sigma(double epsilon_agg, double delta,
                              uint64_t rounds, double l2_sensitivity);

// Laplace scale from per-round pure-epsilon composition: b = l1 / eps_round.
double central_laplace_scale(double epsilon_agg, double delta, uint64_t rounds,
                             double l1_sensitivity);

// Reference sampling rates at N = 1.6e6, delta = 1e-6, theta = 10, from the
// published comparison tables; columns T in {12, 6, 4, 3}, rows eps_agg in
// {1, 0.5, 0.25}.
struct ReferenceSamplingRates {
  static constexpr uint64_t kRounds[4] = {12, 6, 4, 3};
  static constexpr double kEpsAgg[3] = {1.0, 0.5, 0.25};
  static constexpr double kTrieHH[3][4] = {
      {0.0079, 0.0153, 0.0221, 0.0283},
      {0.0040, 0.0079, 0.0117, 0.0153},
      {0.0020, 0.0040, 0.0060, 0.0079},
  };
  static constexpr double kTrieHHpp[3][4] = {
      {0.0071, 0.0129, 0.0193, 0.0255},
      {0.0032, 0.0067, 0.0102, 0.0138},
      {0.0016, 0.0034, 0.0053, 0.0071},
  };
};

}  // namespace prefixhh

#endif  // PREFIXHH_BASELINES_HPP
