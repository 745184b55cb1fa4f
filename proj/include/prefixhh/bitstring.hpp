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

#ifndef PREFIXHH_BITSTRING_HPP
#define PREFIXHH_BITSTRING_HPP

#include <cassert>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace prefixhh {

// A bit sequence of length 0..64 packed into a uint64. Bit 0 is the first
// bit of the stream and occupies the most significant used position, so the
// packed value of a string equals its big-endian integer reading and equal
// length strings sort lexicographically by value.
class BitString {
 public:
  static constexpr int kMaxBits = 64;

  constexpr BitString() : value_(0), len_(0) {}
  constexpr BitString(uint64_t value, int len) : value_(value), len_(len) {
    assert(len >= 0 && len <= kMaxBits);
    assert(len == kMaxBits || (value >> len) == 0);
  }

  static BitString from_string(const std::string& bits) {
    BitString out;
    for (char c : bits) {
      assert(c == '0' || c == '1');
      out = out.append_bit(c == '1');
    }
    return out;
  }

  constexpr int length() const { return len_; }
  constexpr bool empty() const { return len_ == 0; }
  constexpr uint64_t value() const { return value_; }

  constexpr bool bit(int i) const {
    assert(i >= 0 && i < len_);
    return (value_ >> (len_ - 1 - i)) & 1u;
  }

  constexpr BitString append_bit(bool b) const {
    assert(len_ < kMaxBits);
    return BitString((value_ << 1) | (b ? 1u : 0u), len_ + 1);
  }

  constexpr BitString append(BitString other) const {
    assert(len_ + other.len_ <= kMaxBits);
    if (other.len_ == 0) return *this;
    return BitString((value_ << other.len_) | other.value_, len_ + other.len_);
  }

  // First n bits.
  constexpr BitString prefix(int n) const {
    assert(n >= 0 && n <= len_);
    if (n == 0) return BitString();
    return BitString(value_ >> (len_ - n), n);
  }

  // n bits starting at position pos.
  constexpr BitString substr(int pos, int n) const {
    assert(pos >= 0 && n >= 0 && pos + n <= len_);
    if (n == 0) return BitString();
    uint64_t shifted = value_ >> (len_ - pos - n);
    uint64_t mask = (n == kMaxBits) ? ~0ULL : ((1ULL << n) - 1);
    return BitString(shifted & mask, n);
  }

  constexpr bool is_prefix_of(BitString other) const {
    return len_ <= other.len_ && other.prefix(len_) == *this;
  }

  // Appends zero bits up to length n.
  constexpr BitString zero_extend(int n) const {
    assert(n >= len_ && n <= kMaxBits);
    if (n == len_) return *this;
    return BitString(value_ << (n - len_), n);
  }

  std::string to_string() const {
    std::string s;
    s.reserve(len_);
    for (int i = 0; i < len_; ++i) s.push_back(bit(i) ? '1' : '0');
    return s;
  }

  friend constexpr bool operator==(BitString a, BitString b) {
    return a.len_ == b.len_ && a.value_ == b.value_;
  }

  // Lexicographic over bits; a proper prefix sorts before its extensions.
  friend constexpr std::strong_ordering operator<=>(BitString a, BitString b) {
    int common = a.len_ < b.len_ ? a.len_ : b.len_;
    uint64_t av = common == 0 ? 0 : a.value_ >> (a.len_ - common);
    uint64_t bv = common == 0 ? 0 : b.value_ >> (b.len_ - common);
    if (av != bv) return av <=> bv;
    return a.len_ <=> b.len_;
  }

 private:
  uint64_t value_;
  int len_;
};

struct BitStringHash {
  size_t operator()(BitString b) const {
    uint64_t h = b.value() * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<uint64_t>(b.length()) * 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
    return static_cast<size_t>(h);
  }
};

// An encoded data point: exactly r bits (codewords, END, zero padding).
using EncodedWord = BitString;
// A proper or improper leading segment of an encoded data point.
using Prefix = BitString;

}  // namespace prefixhh

#endif  // PREFIXHH_BITSTRING_HPP
