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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "prefixhh/accountant.hpp"
#include "prefixhh/errors.hpp"

using namespace prefixhh;

TEST_CASE("shuffle amplification shrinks epsilon and improves with n") {
  ShuffleResult r = amplify_shuffle(1.0, 1e-7, 1000000);
  CHECK(r.amplified);
  CHECK(r.epsilon < 1.0);
  ShuffleResult half = amplify_shuffle(1.0, 1e-7, 500000);
  CHECK(half.epsilon > r.epsilon);
  ShuffleResult huge = amplify_shuffle(1.0, 1e-7, 1000000000000ULL);
  CHECK(huge.epsilon < 1e-3);
}

TEST_CASE("shuffle amplification outside the validity domain is identity") {
  // eps above log(n / (16 log(2/delta))).
  ShuffleResult r = amplify_shuffle(10.0, 1e-6, 1000);
  CHECK_FALSE(r.amplified);
  CHECK(r.epsilon == doctest::Approx(10.0));
  CHECK_THROWS_AS(amplify_shuffle(1.0, 1e-7, 0), Error);
}

TEST_CASE("advanced composition equals the minimum of both branches") {
  auto [e1, d1] = compose_advanced(0.4, 1e-8, 1, 1e-7);
  CHECK(e1 == doctest::Approx(0.4));
  CHECK(d1 == doctest::Approx(1e-8 + 1e-7));

  auto [e0, d0] = compose_advanced(0.0, 1e-8, 5, 1e-7);
  CHECK(e0 == doctest::Approx(0.0));
  CHECK(d0 == doctest::Approx(5e-8 + 1e-7));

  const double eps = 0.3, slack = 1e-7;
  const uint64_t t = 4;
  auto [e, d] = compose_advanced(eps, 1e-8, t, slack);
  const double linear = t * eps;
  const double advanced = std::sqrt(2.0 * t * std::log(1.0 / slack)) * eps +
                          t * eps * (std::exp(eps) - 1.0);
  CHECK(e == doctest::Approx(std::min(linear, advanced)));
  CHECK(d == doctest::Approx(t * 1e-8 + slack));
}

TEST_CASE("subsampling amplification") {
  CHECK(amplify_subsample(1.7, 1.0) == doctest::Approx(1.7));
  CHECK(amplify_subsample(1.0, 0.5) ==
        doctest::Approx(std::log(1.0 + 0.5 * (std::exp(1.0) - 1.0))));
  CHECK(amplify_subsample(1.0, 1e-9) < 1e-6);
  CHECK_THROWS_AS(amplify_subsample(1.0, 0.0), Error);
  CHECK_THROWS_AS(amplify_subsample(1.0, 1.5), Error);
}

TEST_CASE("solver satisfies the binary search contract") {
  PrivacyBudget budget;
  budget.epsilon_agg = 1.0;
  budget.delta = 1e-6;
  budget.rounds = 4;
  budget.n_devices = 1600000;
  const double tol = 1e-3;
  AccountantResult res = solve_local_epsilon(budget, tol);
  CHECK(res.epsilon_local > 0.0);
  CHECK(res.achieved_epsilon_agg <= budget.epsilon_agg);
  CHECK(achieved_epsilon_agg(res.epsilon_local, budget) <=
        budget.epsilon_agg);
  CHECK(achieved_epsilon_agg(res.epsilon_local + 2 * tol, budget) >
        budget.epsilon_agg);
}

TEST_CASE("solver monotone in rounds, budget, and devices") {
  PrivacyBudget base;
  base.delta = 1e-6;
  base.n_devices = 100000;

  double prev = 1e9;
  for (uint64_t t = 1; t <= 6; ++t) {
    PrivacyBudget b = base;
    b.epsilon_agg = 1.0;
    b.rounds = t;
    const double eps = solve_local_epsilon(b).epsilon_local;
    CHECK(eps <= prev + 1e-9);
    prev = eps;
  }

  prev = 0.0;
  for (double ea : {0.25, 0.5, 1.0}) {
    PrivacyBudget b = base;
    b.epsilon_agg = ea;
    b.rounds = 4;
    const double eps = solve_local_epsilon(b).epsilon_local;
    CHECK(eps >= prev - 1e-9);
    prev = eps;
  }

  prev = 0.0;
  for (uint64_t n : {100000ull, 1000000ull}) {
    PrivacyBudget b = base;
    b.epsilon_agg = 1.0;
    b.rounds = 4;
    b.n_devices = n;
    const double eps = solve_local_epsilon(b).epsilon_local;
    CHECK(eps >= prev - 1e-9);
    prev = eps;
  }
}

TEST_CASE("solver with subsampling stays within budget") {
  PrivacyBudget b;
  b.epsilon_agg = 1.0;
  b.delta = 1e-7;
  b.rounds = 3;
  b.n_devices = 1000000;
  b.sampling_rate = 0.3;
  AccountantResult res = solve_local_epsilon(b);
  CHECK(res.epsilon_local > 0.0);
  CHECK(res.achieved_epsilon_agg <= b.epsilon_agg);
}

TEST_CASE("impossible budgets raise BudgetTooTight") {
  PrivacyBudget b;
  b.epsilon_agg = 1e-6;
  b.delta = 1e-9;
  b.rounds = 50;
  b.n_devices = 10;
  CHECK_THROWS_AS(solve_local_epsilon(b), Error);
}

TEST_CASE("solver is deterministic") {
  PrivacyBudget b;
  b.epsilon_agg = 0.5;
  b.delta = 1e-6;
  b.rounds = 2;
  b.n_devices = 50000;
  AccountantResult r1 = solve_local_epsilon(b);
  AccountantResult r2 = solve_local_epsilon(b);
  CHECK(r1.epsilon_local == r2.epsilon_local);
  CHECK(r1.achieved_epsilon_agg == r2.achieved_epsilon_agg);
}

TEST_CASE("delta above 1/N warns") {
  PrivacyBudget b;
  b.epsilon_agg = 1.0;
  b.delta = 1e-3;
  b.rounds = 1;
  b.n_devices = 10000;
  CHECK_FALSE(b.warnings().empty());
  b.delta = 1e-6;
  CHECK(b.warnings().empty());
}
