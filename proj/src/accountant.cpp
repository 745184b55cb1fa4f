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

#include "prefixhh/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prefixhh/errors.hpp"

namespace prefixhh {

namespace {
constexpr double kEpsLow = 1e-4;
constexpr double kEpsHigh = 64.0;
constexpr const char* kBoundName = "clones-closed-form+advanced-composition";
}  // namespace

void PrivacyBudget::validate() const {
  if (!(epsilon_agg > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "budget: epsilon_agg must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "budget: delta must be in (0, 1)");
  }
  if (rounds < 1) {
    throw Error(ErrorCode::kInvalidArgument, "budget: rounds must be >= 1");
  }
  if (n_devices < 1) {
    throw Error(ErrorCode::kInvalidArgument, "budget: n_devices must be >= 1");
  }
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "budget: sampling_rate must be in (0, 1]");
  }
}

std::vector<std::string> PrivacyBudget::warnings() const {
  std::vector<std::string> out;
  if (delta >= 1.0 / static_cast<double>(n_devices)) {
    std::ostringstream os;
    os << "delta = " << delta << " is not below 1/N = "
       << 1.0 / static_cast<double>(n_devices);
    out.push_back(os.str());
  }
  return out;
}

ShuffleResult amplify_shuffle(double epsilon_local, double delta_round,
                              uint64_t n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "amplify_shuffle: n must be > 0");
  }
  if (!(epsilon_local > 0.0) || !(delta_round > 0.0 && delta_round < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "amplify_shuffle: bad epsilon or delta");
  }
  const double dn = static_cast<double>(n);
  const double domain_cap = std::log(dn / (16.0 * std::log(2.0 / delta_round)));
  if (!(epsilon_local <= domain_cap)) {
    return {epsilon_local, false};
  }
  const double e = std::exp(epsilon_local);
  const double term = 4.0 * std::sqrt(2.0 * std::log(4.0 / delta_round)) /
                          std::sqrt((e + 1.0) * dn) +
                      4.0 / dn;
  return {std::log1p((e - 1.0) * term), true};
}

std::pair<double, double> compose_advanced(double epsilon_round,
                                           double delta_round, uint64_t rounds,
                                           double delta_slack) {
  if (rounds < 1) {
    throw Error(ErrorCode::kInvalidArgument, "compose_advanced: rounds >= 1");
  }
  const double t = static_cast<double>(rounds);
  const double linear = t * epsilon_round;
  const double advanced =
      std::sqrt(2.0 * t * std::log(1.0 / delta_slack)) * epsilon_round +
      t * epsilon_round * std::expm1(epsilon_round);
  return {std::min(linear, advanced), t * delta_round + delta_slack};
}

double amplify_subsample(double epsilon, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "amplify_subsample: gamma must be in (0, 1]");
  }
  if (gamma == 1.0) return epsilon;
  return std::log1p(gamma * std::expm1(epsilon));
}

double achieved_epsilon_agg(double epsilon_local,
                            const PrivacyBudget& budget) {
  budget.validate();
  const double delta_round =
      budget.delta / (2.0 * static_cast<double>(budget.rounds));
  const double delta_slack = budget.delta / 2.0;
  double eps = epsilon_local;
  uint64_t n = budget.n_devices;
  if (budget.sampling_rate < 1.0) {
    eps = amplify_subsample(eps, budget.sampling_rate);
    n = std::max<uint64_t>(
        1, static_cast<uint64_t>(std::llround(
               budget.sampling_rate * static_cast<double>(budget.n_devices))));
  }
  const double eps_round = amplify_shuffle(eps, delta_round, n).epsilon;
  return compose_advanced(eps_round, delta_round, budget.rounds, delta_slack)
      .first;
}

AccountantResult solve_local_epsilon(const PrivacyBudget& budget,
                                     double tolerance) {
  budget.validate();
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "solve_local_epsilon: tolerance must be > 0");
  }
  const double target = budget.epsilon_agg;
  const auto achieved = [&](double eps_l) {
    return achieved_epsilon_agg(eps_l, budget);
  };

  if (achieved(kEpsLow) > target) {
    throw Error(ErrorCode::kBudgetTooTight,
                "solve_local_epsilon: budget unachievable at the bracket "
                "floor epsilon_local = 1e-4");
  }

  double lo = kEpsLow;
  double hi = kEpsHigh;
  if (achieved(hi) <= target) {
    lo = hi;  // everything in the bracket is feasible
  } else {
    // Invariant: achieved(lo) <= target < achieved(hi).
    int iter = 0;
    while (hi - lo > tolerance && iter++ < 200) {
      double mid = 0.5 * (lo + hi);
      if (achieved(mid) <= target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  AccountantResult result;
  result.epsilon_local = lo;
  result.achieved_epsilon_agg = achieved(lo);
  result.achieved_delta = budget.delta;
  result.bound_name = kBoundName;
  uint64_t n_eff = budget.n_devices;
  double eps_eff = lo;
  if (budget.sampling_rate < 1.0) {
    eps_eff = amplify_subsample(lo, budget.sampling_rate);
    n_eff = std::max<uint64_t>(
        1, static_cast<uint64_t>(std::llround(
               budget.sampling_rate * static_cast<double>(budget.n_devices))));
  }
  result.amplification_in_domain =
      amplify_shuffle(eps_eff,
                      budget.delta / (2.0 * static_cast<double>(budget.rounds)),
                      n_eff)
          .amplified;
  return result;
}

}  // namespace prefixhh
