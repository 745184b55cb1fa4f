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

#ifndef PREFIXHH_CODEBOOK_HPP
#define PREFIXHH_CODEBOOK_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prefixhh/bitstring.hpp"

namespace prefixhh {

// Symbols are unicode scalar values plus two reserved sentinels placed just
// above the unicode range so they sort after every real character.
using Symbol = uint32_t;
constexpr Symbol kEndSymbol = 0x110000;
constexpr Symbol kUnknownSymbol = 0x110001;

// Immutable prefix-free symbol -> codeword map. END and UNKNOWN always carry
// codewords. All operations are pure.
class Codebook {
 public:
  enum class Mode { kHuffman, kFixedWidth };

  // Deterministic Huffman code over the corpus counts. END and UNKNOWN are
  // added with count 1 when absent. Merge ties break on the lexicographically
  // smallest symbol contained in each subtree; the smaller node takes bit 0.
  static Codebook build_huffman(const std::map<Symbol, uint64_t>& counts);

  // Every symbol maps to a distinct width-k code, assigned in symbol order.
  // END and UNKNOWN are appended when absent.
  static Codebook build_fixed_width(const std::vector<Symbol>& symbols,
                                    int bits_per_symbol);

  // One line per symbol: "<codepoint-decimal>\t<bits>", with reserved lines
  // "END" and "UNK".
  static Codebook load(std::istream& in);
  static Codebook load_file(const std::string& path);
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

  Mode mode() const { return mode_; }
  const std::map<Symbol, BitString>& codes() const { return codes_; }
  BitString code(Symbol s) const;
  BitString end_code() const { return code(kEndSymbol); }
  bool has(Symbol s) const { return codes_.count(s) != 0; }

  // Greedy decode of one codeword at bit offset pos. Returns the symbol and
  // advances pos past it, or nullopt when no codeword matches.
  std::optional<Symbol> decode_symbol(BitString bits, int& pos) const;

 private:
  Codebook(Mode mode, std::map<Symbol, BitString> codes);

  Mode mode_;
  std::map<Symbol, BitString> codes_;
  // Decode table: codewords sorted by bit pattern for greedy matching.
  std::vector<std::pair<BitString, Symbol>> sorted_codes_;
};

// Encodes word as codewords + END + zero padding, exactly r bits. Symbols
// missing from the codebook encode as UNKNOWN. Throws Error{kWordTooLong}
// when codewords + END exceed r.
EncodedWord encode(const std::vector<Symbol>& word, const Codebook& cb, int r);

// Greedy decode up to the END codeword; padding after END is ignored.
// Throws Error{kInvalidArgument} if no END is reached.
std::vector<Symbol> decode(EncodedWord bits, const Codebook& cb);

// True iff greedy decode consumes every bit of p and the last symbol is END.
bool is_complete(Prefix p, const Codebook& cb);

// UTF-8 <-> symbol sequence. Invalid UTF-8 decodes to UNKNOWN per byte.
std::vector<Symbol> utf8_to_symbols(const std::string& s);
std::string symbols_to_utf8(const std::vector<Symbol>& symbols);

// Convenience: encode a UTF-8 word.
EncodedWord encode_utf8(const std::string& word, const Codebook& cb, int r);
// Decode to UTF-8; nullopt when bits do not decode to a completed word.
std::optional<std::string> decode_utf8(EncodedWord bits, const Codebook& cb);

}  // namespace prefixhh

#endif  // PREFIXHH_CODEBOOK_HPP
