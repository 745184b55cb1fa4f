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

#include "prefixhh/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_map>

#include "prefixhh/errors.hpp"
#include "prefixhh/rng.hpp"

namespace prefixhh {

namespace {
constexpr uint64_t kTagZipfDevice = 0x21bf00ULL;

bool has_whitespace(const std::string& s) {
  for (unsigned char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
        c == '\f') {
      return true;
    }
  }
  return false;
}
}  // namespace

void ZipfSpec::validate() const {
  if (n_devices < 1 || vocab_size < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "zipf spec: need at least one device and one word");
  }
  if (!(exponent > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "zipf spec: exponent must be > 0");
  }
  if (!(words_per_device_mean > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "zipf spec: words_per_device_mean must be > 0");
  }
}

std::string zipf_word(uint64_t rank) {
  // Pronounceable consonant-vowel syllables keep word lengths in a realistic
  // 2-6 character range (bijective base-20 over syllables).
  static constexpr char kConsonants[] = {'b', 'c', 'd', 'f'};
  static constexpr char kVowels[] = {'a', 'e', 'i', 'o', 'u'};
  std::string s;
  uint64_t n = rank + 1;
  while (n > 0) {
    --n;
    const uint64_t syllable = n % 20;
    s.push_back(kVowels[syllable % 5]);
    s.push_back(kConsonants[syllable / 5]);
    n /= 20;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<std::string> zipf_vocabulary(uint64_t vocab_size) {
  std::vector<std::string> v;
  v.reserve(vocab_size);
  for (uint64_t i = 0; i < vocab_size; ++i) v.push_back(zipf_word(i));
  return v;
}

RawDataset generate_zipf(const ZipfSpec& spec) {
  spec.validate();
  std::vector<double> cum(spec.vocab_size);
  double total = 0.0;
  for (uint64_t k = 0; k < spec.vocab_size; ++k) {
    total += std::pow(static_cast<double>(k + 1), -spec.exponent);
    cum[k] = total;
  }
  std::vector<std::string> vocab = zipf_vocabulary(spec.vocab_size);

  RawDataset raw;
  raw.devices.resize(spec.n_devices);
  for (uint64_t i = 0; i < spec.n_devices; ++i) {
    Rng rng(derive_seed(spec.seed, kTagZipfDevice, i));
    std::poisson_distribution<uint32_t> poisson(spec.words_per_device_mean);
    uint32_t n_words = std::max(spec.words_per_device_min, poisson(rng));
    std::map<uint64_t, uint32_t> counts;
    for (uint32_t w = 0; w < n_words; ++w) {
      double u = rng.uniform() * total;
      uint64_t rank = static_cast<uint64_t>(
          std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      if (rank >= spec.vocab_size) rank = spec.vocab_size - 1;
      ++counts[rank];
    }
    RawDataset::Device& dev = raw.devices[i];
    dev.user_id = "u" + std::to_string(i);
    dev.words.reserve(counts.size());
    for (const auto& [rank, c] : counts) dev.words.emplace_back(vocab[rank], c);
  }
  return raw;
}

RawDataset load_tsv_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset: " + path);
  RawDataset raw;
  std::unordered_map<std::string, size_t> device_index;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fail = [&](const std::string& why) -> Error {
      return Error(ErrorCode::kParse,
                   path + ":" + std::to_string(line_no) + ": " + why);
    };
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos
                                      : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos ||
        line.find('\t', t2 + 1) != std::string::npos) {
      throw fail("expected user_id<TAB>word<TAB>count");
    }
    std::string user = line.substr(0, t1);
    std::string word = line.substr(t1 + 1, t2 - t1 - 1);
    std::string count_str = line.substr(t2 + 1);
    if (user.empty()) throw fail("empty user_id");
    if (word.empty() || has_whitespace(word)) throw fail("bad word token");
    uint64_t count = 0;
    for (char c : count_str) {
      if (c < '0' || c > '9') throw fail("bad count");
      count = count * 10 + static_cast<uint64_t>(c - '0');
      if (count > 0xffffffffULL) throw fail("count too large");
    }
    if (count_str.empty() || count == 0) throw fail("count must be positive");

    auto [it, inserted] = device_index.try_emplace(user, raw.devices.size());
    if (inserted) {
      raw.devices.push_back({user, {}});
    }
    auto& words = raw.devices[it->second].words;
    auto found = std::find_if(words.begin(), words.end(),
                              [&](const auto& p) { return p.first == word; });
    if (found != words.end()) {
      found->second += static_cast<uint32_t>(count);
    } else {
      words.emplace_back(word, static_cast<uint32_t>(count));
    }
  }
  if (raw.devices.empty()) {
    throw Error(ErrorCode::kParse, path + ": no devices found");
  }
  return raw;
}

void save_tsv(const std::string& path, const RawDataset& raw) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write dataset: " + path);
  for (const auto& dev : raw.devices) {
    for (const auto& [word, count] : dev.words) {
      out << dev.user_id << '\t' << word << '\t' << count << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::vector<DeviceDataset> encode_dataset(const RawDataset& raw,
                                          const Codebook& cb, int r,
                                          EncodeStats* stats) {
  std::vector<DeviceDataset> out;
  out.reserve(raw.devices.size());
  EncodeStats local;
  for (const auto& dev : raw.devices) {
    DeviceDataset d;
    for (const auto& [word, count] : dev.words) {
      try {
        d.add(encode_utf8(word, cb, r), count);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kWordTooLong) throw;
        ++local.dropped_words;
        local.dropped_count += count;
      }
    }
    out.push_back(std::move(d));
  }
  if (stats) *stats = local;
  return out;
}

std::vector<DeviceDataset> load_tsv(const std::string& path,
                                    const Codebook& cb, int r,
                                    EncodeStats* stats) {
  return encode_dataset(load_tsv_raw(path), cb, r, stats);
}

std::map<Symbol, uint64_t> symbol_frequencies(const RawDataset& raw) {
  std::map<Symbol, uint64_t> freq;
  for (const auto& dev : raw.devices) {
    for (const auto& [word, count] : dev.words) {
      for (Symbol s : utf8_to_symbols(word)) freq[s] += count;
    }
  }
  return freq;
}

std::vector<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open word list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

}  // namespace prefixhh
