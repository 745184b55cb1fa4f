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

#ifndef PREFIXHH_DATA_HPP
#define PREFIXHH_DATA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prefixhh/codebook.hpp"
#include "prefixhh/device.hpp"

namespace prefixhh {

// Pre-encoding view of a corpus: per device, distinct words with counts.
struct RawDataset {
  struct Device {
    std::string user_id;
    std::vector<std::pair<std::string, uint32_t>> words;
  };
  std::vector<Device> devices;
};

struct ZipfSpec {
  uint64_t n_devices = 1;
  uint64_t vocab_size = 1;
  double exponent = 1.0;               // z, rank k drawn with mass k^-z
  double words_per_device_mean = 10.0;  // Poisson mean
  uint32_t words_per_device_min = 1;
  uint64_t seed = 0;

  void validate() const;
};

struct EncodeStats {
  uint64_t dropped_words = 0;  // distinct (device, word) entries over budget
  uint64_t dropped_count = 0;  // total multiplicity dropped
};

// Vocabulary word for rank i (0-based): "a", "b", ..., "z", "aa", ...
std::string zipf_word(uint64_t rank);
std::vector<std::string> zipf_vocabulary(uint64_t vocab_size);

// Each device draws max(min, Poisson(mean)) i.i.d. Zipf(z) words.
RawDataset generate_zipf(const ZipfSpec& spec);

// Lines of `user_id<TAB>word<TAB>count`. Duplicate (user, word) lines sum.
RawDataset load_tsv_raw(const std::string& path);
void save_tsv(const std::string& path, const RawDataset& raw);

// Encodes each word to r bits; words over budget are dropped and counted.
std::vector<DeviceDataset> encode_dataset(const RawDataset& raw,
                                          const Codebook& cb, int r,
                                          EncodeStats* stats = nullptr);

std::vector<DeviceDataset> load_tsv(const std::string& path,
                                    const Codebook& cb, int r,
                                    EncodeStats* stats = nullptr);

// Corpus symbol counts (weighted by word multiplicities), e.g. as Huffman
// construction input.
std::map<Symbol, uint64_t> symbol_frequencies(const RawDataset& raw);

// Plain word-per-line list (deny lists, warm starts).
std::vector<std::string> load_word_list(const std::string& path);

}  // namespace prefixhh

#endif  // PREFIXHH_DATA_HPP
