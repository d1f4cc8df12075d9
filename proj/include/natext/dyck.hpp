#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "natext/factorize.hpp"

namespace natext {

// Balanced binary word over {1,0}, stored bit-packed MSB-first with an
// explicit bit length so the empty word is representable. Construction does
// not enforce balance; valid() checks it and decode() rejects malformed input.
class DyckWord {
 public:
  DyckWord() = default;

  static DyckWord from_ascii(std::string_view s) {
    DyckWord w;
    w.bits_.reserve((s.size() + 7) / 8);
    for (char c : s) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("Dyck word may contain only '0' and '1'");
      w.push_back(c == '1');
    }
    return w;
  }

  void push_back(bool up) {
    const std::size_t byte = nbits_ / 8;
    if (byte == bits_.size()) bits_.push_back(0);
    if (up) bits_[byte] |= static_cast<std::uint8_t>(0x80u >> (nbits_ % 8));
    ++nbits_;
  }

  bool bit(std::size_t i) const { return (bits_[i / 8] >> (7 - i % 8)) & 1u; }
  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }
  std::span<const std::uint8_t> bytes() const { return bits_; }

  std::string ascii() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }

  // Balanced with every proper prefix holding at least as many 1s as 0s.
  bool valid() const {
    std::int64_t depth = 0;
    for (std::size_t i = 0; i < nbits_; ++i) {
      depth += bit(i) ? 1 : -1;
      if (depth < 0) return false;
    }
    return depth == 0;
  }

  friend bool operator==(const DyckWord& a, const DyckWord& b) {
    return a.nbits_ == b.nbits_ && a.bits_ == b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::uint32_t nbits_ = 0;
};

// Rank tie order: shorter word first, then lexicographic with 0 < 1.
inline bool tie_less(const DyckWord& a, const DyckWord& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.bit(i) != b.bit(i)) return !a.bit(i);
  return false;
}

inline bool tie_less(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Planar rooted tree; child order is significant.
struct PlanarTree {
  std::vector<PlanarTree> children;

  bool leaf() const { return children.empty(); }
  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
  }
  std::size_t edge_count() const { return node_count() - 1; }
  friend bool operator==(const PlanarTree&, const PlanarTree&) = default;
};

// Tree of n: one child per prime factor in increasing-prime order, each child
// being the tree of that prime's exponent; 1 maps to a bare leaf.
inline PlanarTree tree_of(std::uint64_t n, const Factorizer& factorizer) {
  if (n == 0) throw std::domain_error("0 has no tree representation");
  PlanarTree t;
  if (n == 1) return t;
  for (const auto& [p, e] : factorizer.factorize(n))
    t.children.push_back(tree_of(e, factorizer));
  return t;
}

namespace detail {

inline void encode_into(const PlanarTree& t, DyckWord& w) {
  for (const auto& c : t.children) {
    w.push_back(true);
    encode_into(c, w);
    w.push_back(false);
  }
}

}  // namespace detail

// Preorder traversal: 1 on the way down an edge, 0 on the way back up.
inline DyckWord encode(const PlanarTree& t) {
  DyckWord w;
  detail::encode_into(t, w);
  return w;
}

inline PlanarTree decode(const DyckWord& w) {
  if (w.size() % 2 != 0)
    throw std::invalid_argument("malformed Dyck word: odd length");
  PlanarTree root;
  std::vector<PlanarTree*> stack{&root};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.bit(i)) {
      stack.back()->children.emplace_back();
      stack.push_back(&stack.back()->children.back());
    } else {
      stack.pop_back();
      if (stack.empty())
        throw std::invalid_argument("malformed Dyck word: prefix closes below root at bit " +
                                    std::to_string(i));
    }
  }
  if (stack.size() != 1)
    throw std::invalid_argument("malformed Dyck word: unbalanced");
  return root;
}

// True iff the word is a nonempty run of "10" blocks (the bush shape of a
// square-free number).
inline bool is_square_free_shape(const DyckWord& w) {
  if (w.empty() || w.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < w.size(); i += 2)
    if (!w.bit(i) || w.bit(i + 1)) return false;
  return true;
}

inline bool is_square_free_shape(std::string_view ascii) {
  if (ascii.empty() || ascii.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < ascii.size(); i += 2)
    if (ascii[i] != '1' || ascii[i + 1] != '0') return false;
  return true;
}

// ASCII encoder for the generation hot path. Exponents of 64-bit inputs stay
// below 64, so their words are built once.
class WordEncoder {
 public:
  WordEncoder() {
    exp_[1] = "";
    for (unsigned e = 2; e < kMaxExponent; ++e) {
      std::string w;
      unsigned m = e;
      for (unsigned p = 2; m > 1; ++p) {
        unsigned c = 0;
        while (m % p == 0) {
          m /= p;
          ++c;
        }
        if (c > 0) {
          w += '1';
          w += exp_[c];
          w += '0';
        }
      }
      exp_[e] = std::move(w);
    }
  }

  std::string_view exponent_word(unsigned e) const {
    if (e == 0 || e >= kMaxExponent) throw std::domain_error("exponent out of range");
    return exp_[e];
  }

  void append_word(std::string& out, std::span<const std::uint8_t> exponents) const {
    for (std::uint8_t e : exponents) {
      out += '1';
      out += exp_[e];
      out += '0';
    }
  }

  std::string word_of(std::uint64_t n, const Factorizer& factorizer) const {
    if (n == 0) throw std::domain_error("0 has no word");
    std::string out;
    for (const auto& [p, e] : factorizer.factorize(n)) {
      out += '1';
      out += exp_[e];
      out += '0';
    }
    return out;
  }

 private:
  static constexpr unsigned kMaxExponent = 64;
  std::array<std::string, kMaxExponent> exp_;
};

}  // namespace natext

template <>
struct std::hash<natext::DyckWord> {
  std::size_t operator()(const natext::DyckWord& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint8_t b : w.bytes()) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
    h ^= w.size();
    h *= 0x100000001b3ull;
    return static_cast<std::size_t>(h);
  }
};
