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

#ifndef PREFIXHH_METRICS_HPP
#define PREFIXHH_METRICS_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "prefixhh/bitstring.hpp"
#include "prefixhh/device.hpp"
#include "prefixhh/engine.hpp"

namespace prefixhh {

using WordMass = std::unordered_map<BitString, double, BitStringHash>;

// Global empirical view of a dataset: the device-averaged word distribution
// and the fraction of devices holding each word.
struct GlobalDistribution {
  WordMass weighted;  // sums to 1 over all words
  WordMass coverage;  // fraction of devices containing the word
  uint64_t n_devices = 0;
  // Words sorted by weighted mass (descending, ties by bits).
  std::vector<std::pair<BitString, double>> ranking;

  double mass_of(BitString word) const;
  // Total mass of the true top-k words (all mass when k exceeds the support).
  double top_mass(uint64_t k) const;
};

GlobalDistribution global_distribution(
    const std::vector<DeviceDataset>& dataset);

// Union of words present in any device's raw data.
WordSet raw_support(const std::vector<DeviceDataset>& dataset);

// Captured-mass ratio: sum of F over H divided by the mass of the true
// top-|H| words. H must be deduplicated; 1.0 when H is empty.
double weight_ratio(const std::vector<BitString>& hitters,
                    const GlobalDistribution& dist);

// Entry i sums F over the window H[max(0, i-W+1) .. i]. H is expected to be
// ordered by true frequency.
std::vector<double> window_marginals(const std::vector<BitString>& hitters,
                                     const GlobalDistribution& dist,
                                     uint64_t window);

// Fraction of H absent from the membership universe (either the raw dataset
// support or the selected support, depending on what callers pass).
double false_positive_ratio(const std::vector<BitString>& hitters,
                            const WordSet& universe);

// Every word with count >= threshold + lambda must be in the output and
// every word with count < threshold - lambda must not be. true_counts holds
// the nonzero counts; absent words count zero.
bool lambda_accuracy_check(const std::vector<BitString>& output,
                           const WordMass& true_counts, double lambda,
                           double threshold);

struct MetricsReport {
  uint64_t discovered_count = 0;       // output elements beyond the deny list
  uint64_t discovered_true_count = 0;  // of those, words with positive mass
  uint64_t fp_count = 0;
  double fp_ratio = 0.0;
  double weight_ratio = 1.0;
  double utility_loss = 0.0;
  // Ordered (by F descending) discovered words with masses and marginals.
  std::vector<BitString> ordered_hitters;
  std::vector<double> marginals;
};

// Evaluates a run's discoveries (deny-list entries excluded) against the
// dataset. Output elements are zero-extended to r bits, so prefixes cut
// beyond a word's END codeword canonicalize back to that word.
MetricsReport evaluate_run(const RunResult& result,
                           const GlobalDistribution& dist,
                           const WordSet& universe, int r,
                           uint64_t window = 50);

}  // namespace prefixhh

#endif  // PREFIXHH_METRICS_HPP
