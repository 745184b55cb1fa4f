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
#include "doctest.h"
#include "prefixhh/bitstring.hpp"
#include "prefixhh/rng.hpp"

using namespace prefixhh;

TEST_CASE("construction and round trips") {
  BitString b = BitString::from_string("10110");
  CHECK(b.length() == 5);
  CHECK(b.value() == 0b10110);
  CHECK(b.to_string() == "10110");
  CHECK(b.bit(0));
  CHECK_FALSE(b.bit(1));
  CHECK(BitString().empty());
}

TEST_CASE("append, prefix, substr agree with string semantics") {
  Rng rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    const int len_a = static_cast<int>(rng.below(20));
    const int len_b = static_cast<int>(rng.below(20));
    std::string sa, sb;
    for (int i = 0; i < len_a; ++i) sa.push_back(rng.bernoulli(0.5) ? '1' : '0');
    for (int i = 0; i < len_b; ++i) sb.push_back(rng.bernoulli(0.5) ? '1' : '0');
    BitString a = BitString::from_string(sa);
    BitString b = BitString::from_string(sb);
    CHECK(a.append(b).to_string() == sa + sb);
    if (len_a > 0) {
      const int k = static_cast<int>(rng.below(len_a + 1));
      CHECK(a.prefix(k).to_string() == sa.substr(0, k));
      const int pos = static_cast<int>(rng.below(len_a));
      const int n = static_cast<int>(rng.below(len_a - pos + 1));
      CHECK(a.substr(pos, n).to_string() == sa.substr(pos, n));
    }
  }
}

TEST_CASE("ordering is lexicographic with prefixes first") {
  BitString one = BitString::from_string("1");
  BitString one_zero = BitString::from_string("10");
  BitString zero = BitString::from_string("0");
  CHECK(one < one_zero);
  CHECK(zero < one);
  CHECK(one.is_prefix_of(one_zero));
  CHECK_FALSE(one_zero.is_prefix_of(one));
  CHECK(BitString().is_prefix_of(one));
}

TEST_CASE("zero_extend pads with trailing zeros") {
  BitString b = BitString::from_string("101");
  CHECK(b.zero_extend(6).to_string() == "101000");
  CHECK(b.zero_extend(3) == b);
}
