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

#include "prefixhh/codebook.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "prefixhh/errors.hpp"

namespace prefixhh {

namespace {

struct HuffmanNode {
  uint64_t count = 0;
  Symbol min_symbol = 0;  // smallest symbol in the subtree, for tie breaks
  int left = -1;
  int right = -1;
  Symbol leaf = 0;
  bool is_leaf = false;
};

struct QueueEntry {
  uint64_t count;
  Symbol min_symbol;
  int node;
  bool operator>(const QueueEntry& o) const {
    if (count != o.count) return count > o.count;
    return min_symbol > o.min_symbol;
  }
};

void assign_codes(const std::vector<HuffmanNode>& nodes, int node,
                  BitString prefix, std::map<Symbol, BitString>& out) {
  const HuffmanNode& n = nodes[node];
  if (n.is_leaf) {
    out[n.leaf] = prefix;
    return;
  }
  assign_codes(nodes, n.left, prefix.append_bit(false), out);
  assign_codes(nodes, n.right, prefix.append_bit(true), out);
}

}  // namespace

Codebook::Codebook(Mode mode, std::map<Symbol, BitString> codes)
    : mode_(mode), codes_(std::move(codes)) {
  sorted_codes_.reserve(codes_.size());
  for (const auto& [sym, code] : codes_) sorted_codes_.emplace_back(code, sym);
  std::sort(sorted_codes_.begin(), sorted_codes_.end());
}

Codebook Codebook::build_huffman(const std::map<Symbol, uint64_t>& counts) {
  if (counts.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "build_huffman: empty corpus frequencies");
  }
  std::map<Symbol, uint64_t> leaves = counts;
  for (auto& [sym, c] : leaves) {
    if (c == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "build_huffman: symbol counts must be positive");
    }
    (void)sym;
  }
  leaves.try_emplace(kEndSymbol, 1);
  leaves.try_emplace(kUnknownSymbol, 1);

  std::vector<HuffmanNode> nodes;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                      std::greater<QueueEntry>>
      queue;
  for (const auto& [sym, c] : leaves) {
    HuffmanNode n;
    n.count = c;
    n.min_symbol = sym;
    n.is_leaf = true;
    n.leaf = sym;
    nodes.push_back(n);
    queue.push({c, sym, static_cast<int>(nodes.size()) - 1});
  }

  while (queue.size() > 1) {
    QueueEntry a = queue.top();
    queue.pop();
    QueueEntry b = queue.top();
    queue.pop();
    HuffmanNode merged;
    merged.count = a.count + b.count;
    merged.min_symbol = std::min(a.min_symbol, b.min_symbol);
    merged.left = a.node;   // smaller (count, min_symbol) takes bit 0
    merged.right = b.node;
    nodes.push_back(merged);
    queue.push({merged.count, merged.min_symbol,
                static_cast<int>(nodes.size()) - 1});
  }

  std::map<Symbol, BitString> codes;
  int root = queue.top().node;
  if (nodes[root].is_leaf) {
    codes[nodes[root].leaf] = BitString(0, 1);
  } else {
    assign_codes(nodes, root, BitString(), codes);
  }
  return Codebook(Mode::kHuffman, std::move(codes));
}

Codebook Codebook::build_fixed_width(const std::vector<Symbol>& symbols,
                                     int bits_per_symbol) {
  if (bits_per_symbol < 1 || bits_per_symbol >= BitString::kMaxBits) {
    throw Error(ErrorCode::kInvalidArgument,
                "build_fixed_width: bits_per_symbol out of range");
  }
  std::map<Symbol, BitString> codes;
  std::vector<Symbol> all = symbols;
  all.push_back(kEndSymbol);
  all.push_back(kUnknownSymbol);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() > (1ULL << bits_per_symbol)) {
    throw Error(ErrorCode::kInvalidArgument,
                "build_fixed_width: alphabet does not fit in width");
  }
  uint64_t next = 0;
  for (Symbol s : all) codes[s] = BitString(next++, bits_per_symbol);
  return Codebook(Mode::kFixedWidth, std::move(codes));
}

BitString Codebook::code(Symbol s) const {
  auto it = codes_.find(s);
  if (it == codes_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "codebook: unknown symbol");
  }
  return it->second;
}

std::optional<Symbol> Codebook::decode_symbol(BitString bits, int& pos) const {
  const int remaining = bits.length() - pos;
  for (const auto& [code, sym] : sorted_codes_) {
    if (code.length() > remaining) continue;
    if (bits.substr(pos, code.length()) == code) {
      pos += code.length();
      return sym;
    }
  }
  return std::nullopt;
}

void Codebook::save(std::ostream& out) const {
  for (const auto& [sym, code] : codes_) {
    if (sym == kEndSymbol) {
      out << "END";
    } else if (sym == kUnknownSymbol) {
      out << "UNK";
    } else {
      out << sym;
    }
    out << '\t' << code.to_string() << '\n';
  }
}

void Codebook::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write codebook: " + path);
  save(out);
}

Codebook Codebook::load(std::istream& in) {
  std::map<Symbol, BitString> codes;
  std::string line;
  int line_no = 0;
  bool fixed_width = true;
  int width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse, "codebook line " + std::to_string(line_no) +
                                         ": missing tab separator");
    }
    std::string key = line.substr(0, tab);
    std::string bits = line.substr(tab + 1);
    Symbol sym;
    if (key == "END") {
      sym = kEndSymbol;
    } else if (key == "UNK") {
      sym = kUnknownSymbol;
    } else {
      try {
        sym = static_cast<Symbol>(std::stoul(key));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, "codebook line " +
                                           std::to_string(line_no) +
                                           ": bad symbol field");
      }
    }
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::kParse, "codebook line " +
                                           std::to_string(line_no) +
                                           ": bad bitstring");
      }
    }
    if (bits.empty() || bits.size() > BitString::kMaxBits) {
      throw Error(ErrorCode::kParse, "codebook line " +
                                         std::to_string(line_no) +
                                         ": bad codeword length");
    }
    if (!codes.emplace(sym, BitString::from_string(bits)).second) {
      throw Error(ErrorCode::kParse, "codebook line " +
                                         std::to_string(line_no) +
                                         ": duplicate symbol");
    }
    if (width == -1) width = static_cast<int>(bits.size());
    if (width != static_cast<int>(bits.size())) fixed_width = false;
  }
  if (codes.count(kEndSymbol) == 0 || codes.count(kUnknownSymbol) == 0) {
    throw Error(ErrorCode::kParse, "codebook: END and UNK lines required");
  }
  // Prefix-freeness check.
  std::vector<BitString> all;
  all.reserve(codes.size());
  for (const auto& [sym, code] : codes) all.push_back(code);
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i].is_prefix_of(all[i + 1])) {
      throw Error(ErrorCode::kParse, "codebook: codewords are not prefix-free");
    }
  }
  return Codebook(fixed_width ? Mode::kFixedWidth : Mode::kHuffman,
                  std::move(codes));
}

Codebook Codebook::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open codebook: " + path);
  return load(in);
}

EncodedWord encode(const std::vector<Symbol>& word, const Codebook& cb,
                   int r) {
  if (r < 1 || r > BitString::kMaxBits) {
    throw Error(ErrorCode::kInvalidArgument, "encode: bad bit length r");
  }
  BitString bits;
  auto push = [&](BitString code) {
    if (bits.length() + code.length() > r) {
      throw Error(ErrorCode::kWordTooLong,
                  "encode: word does not fit in " + std::to_string(r) +
                      " bits");
    }
    bits = bits.append(code);
  };
  for (Symbol s : word) {
    push(cb.has(s) ? cb.code(s) : cb.code(kUnknownSymbol));
  }
  push(cb.end_code());
  return bits.zero_extend(r);
}

std::vector<Symbol> decode(EncodedWord bits, const Codebook& cb) {
  std::vector<Symbol> out;
  int pos = 0;
  while (pos < bits.length()) {
    auto sym = cb.decode_symbol(bits, pos);
    if (!sym) {
      throw Error(ErrorCode::kInvalidArgument,
                  "decode: undecodable bits before END");
    }
    if (*sym == kEndSymbol) return out;
    out.push_back(*sym);
  }
  throw Error(ErrorCode::kInvalidArgument, "decode: no END codeword");
}

bool is_complete(Prefix p, const Codebook& cb) {
  int pos = 0;
  Symbol last = kUnknownSymbol;
  while (pos < p.length()) {
    auto sym = cb.decode_symbol(p, pos);
    if (!sym) return false;
    last = *sym;
  }
  return pos == p.length() && p.length() > 0 && last == kEndSymbol;
}

std::vector<Symbol> utf8_to_symbols(const std::string& s) {
  std::vector<Symbol> out;
  size_t i = 0;
  const auto bad = [&]() { out.push_back(kUnknownSymbol); ++i; };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra;
    uint32_t cp;
    if (c < 0x80) {
      extra = 0;
      cp = c;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c >> 4) == 0xe) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c >> 3) == 0x1e) {
      extra = 3;
      cp = c & 0x07;
    } else {
      bad();
      continue;
    }
    if (i + extra >= s.size()) {
      bad();
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3f);
    }
    if (!ok || cp > 0x10ffff) {
      bad();
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string symbols_to_utf8(const std::vector<Symbol>& symbols) {
  std::string out;
  for (Symbol cp : symbols) {
    if (cp >= kEndSymbol) {
      out += "\xef\xbf\xbd";  // replacement character for reserved symbols
    } else if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }
  return out;
}

EncodedWord encode_utf8(const std::string& word, const Codebook& cb, int r) {
  return encode(utf8_to_symbols(word), cb, r);
}

std::optional<std::string> decode_utf8(EncodedWord bits, const Codebook& cb) {
  try {
    return symbols_to_utf8(decode(bits, cb));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace prefixhh
