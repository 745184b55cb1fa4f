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

#include "prefixhh/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "prefixhh/errors.hpp"

namespace prefixhh {

double GlobalDistribution::mass_of(BitString word) const {
  auto it = weighted.find(word);
  return it == weighted.end() ? 0.0 : it->second;
}

double GlobalDistribution::top_mass(uint64_t k) const {
  double total = 0.0;
  const uint64_t n = std::min<uint64_t>(k, ranking.size());
  for (uint64_t i = 0; i < n; ++i) total += ranking[i].second;
  return total;
}

GlobalDistribution global_distribution(
    const std::vector<DeviceDataset>& dataset) {
  GlobalDistribution dist;
  dist.n_devices = dataset.size();
  if (dataset.empty()) return dist;
  const double inv_n = 1.0 / static_cast<double>(dataset.size());
  for (const DeviceDataset& dev : dataset) {
    const uint64_t total = dev.total_count();
    if (total == 0) continue;
    const double inv_total = 1.0 / static_cast<double>(total);
    for (const auto& e : dev.words) {
      dist.weighted[e.word] += inv_n * inv_total * e.count;
      dist.coverage[e.word] += inv_n;
    }
  }
  dist.ranking.assign(dist.weighted.begin(), dist.weighted.end());
  std::sort(dist.ranking.begin(), dist.ranking.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return dist;
}

WordSet raw_support(const std::vector<DeviceDataset>& dataset) {
  WordSet support;
  for (const DeviceDataset& dev : dataset) {
    for (const auto& e : dev.words) support.insert(e.word);
  }
  return support;
}

double weight_ratio(const std::vector<BitString>& hitters,
                    const GlobalDistribution& dist) {
  if (hitters.empty()) return 1.0;
  double captured = 0.0;
  for (BitString h : hitters) captured += dist.mass_of(h);
  const double best = dist.top_mass(hitters.size());
  if (best <= 0.0) return captured > 0.0 ? 1.0 : 0.0;
  return captured / best;
}

std::vector<double> window_marginals(const std::vector<BitString>& hitters,
                                     const GlobalDistribution& dist,
                                     uint64_t window) {
  if (window < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "window_marginals: window must be >= 1");
  }
  std::vector<double> masses(hitters.size());
  for (size_t i = 0; i < hitters.size(); ++i) {
    masses[i] = dist.mass_of(hitters[i]);
  }
  std::vector<double> out(hitters.size());
  double running = 0.0;
  for (size_t i = 0; i < hitters.size(); ++i) {
    running += masses[i];
    if (i >= window) running -= masses[i - window];
    out[i] = running;
  }
  return out;
}

double false_positive_ratio(const std::vector<BitString>& hitters,
                            const WordSet& universe) {
  if (hitters.empty()) return 0.0;
  uint64_t misses = 0;
  for (BitString h : hitters) {
    if (universe.count(h) == 0) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(hitters.size());
}

bool lambda_accuracy_check(const std::vector<BitString>& output,
                           const WordMass& true_counts, double lambda,
                           double threshold) {
  WordSet out_set;
  for (BitString b : output) out_set.insert(b);
  for (const auto& [word, count] : true_counts) {
    if (count >= threshold + lambda && out_set.count(word) == 0) return false;
  }
  for (BitString b : output) {
    auto it = true_counts.find(b);
    const double count = it == true_counts.end() ? 0.0 : it->second;
    if (count < threshold - lambda) return false;
  }
  return true;
}

MetricsReport evaluate_run(const RunResult& result,
                           const GlobalDistribution& dist,
                           const WordSet& universe, int r, uint64_t window) {
  MetricsReport report;
  WordSet seen;
  for (const HeavyHitter& h : result.heavy_hitters) {
    if (h.origin == HeavyHitter::Origin::kDenyList) continue;
    BitString canonical = h.bits.zero_extend(r);
    if (seen.insert(canonical).second) {
      report.ordered_hitters.push_back(canonical);
    }
  }
  report.discovered_count = report.ordered_hitters.size();
  std::sort(report.ordered_hitters.begin(), report.ordered_hitters.end(),
            [&](BitString a, BitString b) {
              const double ma = dist.mass_of(a);
              const double mb = dist.mass_of(b);
              if (ma != mb) return ma > mb;
              return a < b;
            });
  for (BitString h : report.ordered_hitters) {
    if (dist.mass_of(h) > 0.0) ++report.discovered_true_count;
  }
  for (BitString h : report.ordered_hitters) {
    if (universe.count(h) == 0) ++report.fp_count;
  }
  report.fp_ratio = false_positive_ratio(report.ordered_hitters, universe);
  report.weight_ratio = weight_ratio(report.ordered_hitters, dist);
  report.utility_loss = 1.0 - report.weight_ratio;
  report.marginals = window_marginals(report.ordered_hitters, dist, window);
  return report;
}

}  // namespace prefixhh
