#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "natext/lexicon.hpp"

namespace natext {

enum class SymmetryMode { automatic, hashed, exact };

struct SymmetryReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint32_t k = 0;
  std::uint64_t distinct = 0;
  std::uint64_t reversible = 0;
  double ss = 0;
  bool exact = false;
  bool includes_empty_word = false;  // position 1 participates as a unique symbol
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct TupleHash {
  std::uint64_t h1, h2;
  friend bool operator<(const TupleHash& a, const TupleHash& b) {
    return a.h1 != b.h1 ? a.h1 < b.h1 : a.h2 < b.h2;
  }
  friend bool operator==(const TupleHash&, const TupleHash&) = default;
};

inline constexpr std::uint64_t kLane1 = 0x100000001b3ull;
inline constexpr std::uint64_t kLane2 = 0xc6a4a7935bd1e995ull;

template <bool Reverse>
inline TupleHash tuple_hash(const std::uint32_t* ids, std::uint32_t k) {
  std::uint64_t h1 = 0, h2 = 0;
  for (std::uint32_t j = 0; j < k; ++j) {
    const std::uint64_t v = mix64(ids[Reverse ? k - 1 - j : j] + 2ull);
    h1 = h1 * kLane1 + v;
    h2 = h2 * kLane2 + v;
  }
  return {h1, h2};
}

// 128-bit order-sensitive tuple hashing: sort forward hashes, dedupe, then
// test each representative's reversed hash for membership.
inline SymmetryReport symmetry_hashed(std::span<const std::uint32_t> ids, std::uint32_t k) {
  struct Item {
    TupleHash h;
    std::uint32_t pos;
  };
  const std::size_t m = ids.size() - k + 1;
  std::vector<Item> items;
  items.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    items.push_back({tuple_hash<false>(ids.data() + i, k), static_cast<std::uint32_t>(i)});
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.h < b.h; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Item& a, const Item& b) { return a.h == b.h; }),
              items.end());

  SymmetryReport rep;
  rep.distinct = items.size();
  for (const Item& it : items) {
    const TupleHash rev = tuple_hash<true>(ids.data() + it.pos, k);
    auto lb = std::lower_bound(items.begin(), items.end(), rev,
                               [](const Item& a, const TupleHash& h) { return a.h < h; });
    if (lb != items.end() && lb->h == rev) ++rep.reversible;
  }
  return rep;
}

// Exact variant: distinct tuples identified by comparing id sequences.
inline SymmetryReport symmetry_exact(std::span<const std::uint32_t> ids, std::uint32_t k) {
  const std::size_t m = ids.size() - k + 1;
  std::vector<std::uint32_t> starts(m);
  for (std::size_t i = 0; i < m; ++i) starts[i] = static_cast<std::uint32_t>(i);

  auto fwd_less = [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(ids.begin() + a, ids.begin() + a + k,
                                        ids.begin() + b, ids.begin() + b + k);
  };
  std::sort(starts.begin(), starts.end(), fwd_less);
  starts.erase(std::unique(starts.begin(), starts.end(),
                           [&](std::uint32_t a, std::uint32_t b) {
                             return std::equal(ids.begin() + a, ids.begin() + a + k,
                                               ids.begin() + b);
                           }),
               starts.end());

  SymmetryReport rep;
  rep.distinct = starts.size();
  std::vector<std::uint32_t> rev(k);
  for (std::uint32_t s : starts) {
    for (std::uint32_t j = 0; j < k; ++j) rev[j] = ids[s + k - 1 - j];
    auto lb = std::lower_bound(starts.begin(), starts.end(), rev,
                               [&](std::uint32_t a, const std::vector<std::uint32_t>& r) {
                                 return std::lexicographical_compare(
                                     ids.begin() + a, ids.begin() + a + k, r.begin(), r.end());
                               });
    if (lb != starts.end() &&
        std::equal(rev.begin(), rev.end(), ids.begin() + *lb))
      ++rep.reversible;
  }
  return rep;
}

}  // namespace detail

// Fraction of the distinct contiguous k-tuples of the window whose reversal
// also occurs in it. ids is the window's id sequence (empty-word positions
// carry kEmptyWordId and count as an ordinary symbol); lo is the window start
// position, used only for reporting.
inline SymmetryReport statistical_symmetry(std::span<const std::uint32_t> ids, std::uint64_t lo,
                                           std::uint32_t k,
                                           SymmetryMode mode = SymmetryMode::automatic) {
  if (k < 1 || k > ids.size())
    throw std::out_of_range("tuple size must lie in [1, window length]");
  if (mode == SymmetryMode::automatic)
    mode = ids.size() <= (1u << 21) ? SymmetryMode::exact : SymmetryMode::hashed;

  SymmetryReport rep = mode == SymmetryMode::exact ? detail::symmetry_exact(ids, k)
                                                   : detail::symmetry_hashed(ids, k);
  rep.lo = lo;
  rep.hi = lo + ids.size() - 1;
  rep.k = k;
  rep.ss = static_cast<double>(rep.reversible) / static_cast<double>(rep.distinct);
  rep.exact = mode == SymmetryMode::exact;
  rep.includes_empty_word =
      std::find(ids.begin(), ids.end(), kEmptyWordId) != ids.end();
  return rep;
}

}  // namespace natext
