#pragma once

// Brute-force oracles kept deliberately independent of the library's
// implementation paths: trial division, explicit tree enumeration, double-loop
// walk statistics, and set-based tuple symmetry.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    std::uint32_t e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline bool is_square_free(std::uint64_t n) {
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

// Word of n by direct recursion on the definition.
inline std::string word_of(std::uint64_t n) {
  std::string out;
  for (const auto& [p, e] : factorize(n)) {
    out += '1';
    out += word_of(e);
    out += '0';
  }
  return out;
}

// All Dyck words with m "1"s, generated as bracket sequences.
inline void enumerate_words(int open_left, int depth, std::string& cur,
                            std::vector<std::string>& out) {
  if (open_left == 0 && depth == 0) {
    out.push_back(cur);
    return;
  }
  if (open_left > 0) {
    cur.push_back('1');
    enumerate_words(open_left - 1, depth + 1, cur, out);
    cur.pop_back();
  }
  if (depth > 0) {
    cur.push_back('0');
    enumerate_words(open_left, depth - 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::string> all_words_with_edges(int m) {
  std::vector<std::string> out;
  std::string cur;
  enumerate_words(m, 0, cur, out);
  return out;
}

// MSD by the definition: walk positions s_n from the raw 0/1 signal, then the
// plain double loop over displacement windows.
inline double msd(const std::vector<int>& z, std::uint64_t t) {
  const std::size_t n = z.size();
  double mu = 0;
  for (int v : z) mu += v;
  mu /= static_cast<double>(n);
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) s[i] = s[i - 1] + (z[i - 1] - mu);
  double acc = 0;
  for (std::size_t start = 1; start + t <= n; ++start) {
    const double d = s[start + t] - s[start];
    acc += d * d;
  }
  return acc / static_cast<double>(n - t);
}

inline double cross_msd(const std::vector<int>& z1, const std::vector<int>& z2, std::uint64_t t) {
  const std::size_t n = z1.size();
  double mu1 = 0, mu2 = 0;
  for (int v : z1) mu1 += v;
  for (int v : z2) mu2 += v;
  mu1 /= static_cast<double>(n);
  mu2 /= static_cast<double>(n);
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i)
    s[i] = s[i - 1] + ((z1[i - 1] - mu1) - (z2[i - 1] - mu2));
  double acc = 0;
  for (std::size_t start = 1; start + t <= n; ++start) {
    const double d = s[start + t] - s[start];
    acc += d * d;
  }
  return acc / static_cast<double>(n - t);
}

// Statistical symmetry on explicit tuple sets.
inline std::pair<std::uint64_t, std::uint64_t> symmetry(const std::vector<std::string>& words,
                                                        std::size_t k) {
  std::set<std::vector<std::string>> tuples;
  for (std::size_t i = 0; i + k <= words.size(); ++i)
    tuples.insert(std::vector<std::string>(words.begin() + i, words.begin() + i + k));
  std::uint64_t reversible = 0;
  for (const auto& t : tuples) {
    std::vector<std::string> rev(t.rbegin(), t.rend());
    if (tuples.contains(rev)) ++reversible;
  }
  return {tuples.size(), reversible};
}

inline std::pair<std::uint64_t, std::uint64_t> phrase_count(const std::vector<std::string>& words,
                                                            const std::vector<std::string>& phrase,
                                                            std::uint64_t first_position) {
  std::uint64_t count = 0, first = 0;
  for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < phrase.size(); ++j)
      if (words[i + j] != phrase[j]) {
        ok = false;
        break;
      }
    if (ok) {
      ++count;
      if (first == 0) first = first_position + i;
    }
  }
  return {count, first};
}

}  // namespace oracle
