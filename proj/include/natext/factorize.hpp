#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace natext {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Strictly increasing primes; empty for n = 1.
using PrimeFactorization = std::vector<PrimePower>;

inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

// All primes up to and including limit.
inline std::vector<std::uint32_t> simple_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace detail {

// Largest value whose factorization is guaranteed to have at most 10 distinct
// primes (product of the first 11 primes, minus one). Exponent lists are
// packed 6 bits each into one word by the bulk factorizer below.
inline constexpr std::uint64_t kMaxBulkValue = 200560490129ull;

// True when the list contains every prime <= root. The list may end below
// root when the trailing interval is prime-free, so scan the gap.
inline bool covers_primes(std::span<const std::uint32_t> primes, std::uint64_t root) {
  if (root < 2) return true;
  if (primes.empty()) return false;
  for (std::uint64_t c = primes.back() + 1; c <= root; ++c) {
    bool composite = false;
    for (std::uint32_t p : primes) {
      if (static_cast<std::uint64_t>(p) * p > c) break;
      if (c % p == 0) {
        composite = true;
        break;
      }
    }
    if (!composite) return false;
  }
  return true;
}

}  // namespace detail

// Smallest-prime-factor table for one contiguous value range [base, base+len).
// Composite entries store the factor (always < 2^32); primes in the range are
// stored as 0 and resolved to the value itself by spf().
class SieveSegment {
 public:
  SieveSegment(std::uint64_t base, std::vector<std::uint32_t> spf)
      : base_(base), spf_(std::move(spf)) {}

  std::uint64_t base() const { return base_; }
  std::uint64_t length() const { return spf_.size(); }
  bool contains(std::uint64_t value) const {
    return value >= base_ && value - base_ < spf_.size();
  }

  std::uint64_t spf(std::uint64_t index) const {
    const std::uint32_t p = spf_.at(index);
    return p == 0 ? base_ + index : p;
  }
  std::uint64_t spf_of(std::uint64_t value) const {
    if (!contains(value)) throw std::out_of_range("value outside sieve segment");
    return spf(value - base_);
  }

 private:
  std::uint64_t base_;
  std::vector<std::uint32_t> spf_;
};

// small_primes must contain every prime up to sqrt(base+len-1).
inline SieveSegment build_segment(std::uint64_t base, std::uint64_t len,
                                  std::span<const std::uint32_t> small_primes) {
  if (base < 2) throw std::domain_error("segment base must be >= 2");
  if (len == 0) throw std::domain_error("segment length must be positive");
  if (base > std::numeric_limits<std::uint64_t>::max() - len)
    throw std::overflow_error("segment end overflows 64-bit range");
  const std::uint64_t hi = base + len - 1;
  const std::uint64_t root = isqrt(hi);
  if (!detail::covers_primes(small_primes, root))
    throw std::invalid_argument("small prime list does not cover sqrt of segment end");

  std::vector<std::uint32_t> spf(len, 0);
  for (std::uint32_t p : small_primes) {
    const std::uint64_t p64 = p;
    if (p64 > root) break;
    std::uint64_t first = ((base + p64 - 1) / p64) * p64;
    if (first < p64 * p64) first = p64 * p64;  // smaller multiples keep a smaller factor
    for (std::uint64_t v = first; v <= hi; v += p64) {
      auto& slot = spf[v - base];
      if (slot == 0) slot = p;
    }
  }
  // A value p*q with p <= sqrt(hi) was marked above; p itself may sit in the
  // segment and must stay 0 (prime). Values whose least factor exceeds root
  // are prime as well. Only in-range small primes need no fixup: first >= p*p
  // already skips them.
  return SieveSegment(base, std::move(spf));
}

// Shared factorization context: dense SPF table for small values plus a prime
// list for trial division of anything larger.
class Factorizer {
 public:
  explicit Factorizer(std::uint64_t dense_limit = 1u << 22)
      : dense_limit_(dense_limit < 4 ? 4 : dense_limit) {
    dense_spf_.assign(static_cast<std::size_t>(dense_limit_) + 1, 0);
    for (std::uint64_t i = 2; i <= dense_limit_; ++i) {
      if (dense_spf_[i] == 0) {
        for (std::uint64_t j = i; j <= dense_limit_; j += i)
          if (dense_spf_[j] == 0) dense_spf_[j] = static_cast<std::uint32_t>(i);
        primes_.push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  PrimeFactorization factorize(std::uint64_t n) const {
    if (n == 0) throw std::domain_error("0 has no prime factorization");
    PrimeFactorization out;
    if (n == 1) return out;
    if (n <= dense_limit_) {
      dense_chain(n, out);
      return out;
    }
    std::uint64_t m = n;
    for (std::size_t i = 0; i < primes_.size() && m > 1; ++i) {
      const std::uint64_t p = primes_[i];
      if (p * p > m) break;
      if (m % p == 0) append_power(m, p, out);
      if (m > 1 && m <= dense_limit_) {
        dense_chain(m, out);
        return out;
      }
    }
    if (m > 1) trial_divide_large(m, out);
    return out;
  }

  // Factorize using the segment's SPF entry for the first factor, then the
  // shared tables for the quotient.
  PrimeFactorization factorize(std::uint64_t n, const SieveSegment& segment) const {
    if (n == 0) throw std::domain_error("0 has no prime factorization");
    if (n == 1) return {};
    if (!segment.contains(n)) return factorize(n);
    PrimeFactorization out;
    std::uint64_t m = n;
    const std::uint64_t p = segment.spf_of(n);
    append_power(m, p, out);
    if (m == 1) return out;
    // Remaining factors of m are >= p.
    if (m <= dense_limit_) {
      dense_chain(m, out);
      return out;
    }
    for (std::size_t i = 0; i < primes_.size() && m > 1; ++i) {
      const std::uint64_t q = primes_[i];
      if (q < p) continue;
      if (q * q > m) break;
      if (m % q == 0) append_power(m, q, out);
      if (m > 1 && m <= dense_limit_) {
        dense_chain(m, out);
        return out;
      }
    }
    if (m > 1) trial_divide_large(m, out);
    return out;
  }

  bool is_prime(std::uint64_t n) const {
    if (n < 2) return false;
    auto f = factorize(n);
    return f.size() == 1 && f[0].exponent == 1;
  }

  std::uint64_t dense_limit() const { return dense_limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }

 private:
  void dense_chain(std::uint64_t n, PrimeFactorization& out) const {
    while (n > 1) {
      const std::uint64_t p = dense_spf_[n];
      append_power(n, p, out);
    }
  }

  static void append_power(std::uint64_t& n, std::uint64_t p, PrimeFactorization& out) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }

  // Slow path for values whose factors exceed the precomputed prime list.
  void trial_divide_large(std::uint64_t m, PrimeFactorization& out) const {
    std::uint64_t d = primes_.empty() ? 2 : primes_.back() + 2;
    if (d % 2 == 0) ++d;
    while (d * d <= m) {
      if (m % d == 0) append_power(m, d, out);
      d += 2;
    }
    if (m > 1) out.push_back({m, 1});
  }

  std::uint64_t dense_limit_;
  std::vector<std::uint32_t> dense_spf_;
  std::vector<std::uint32_t> primes_;
};

inline std::uint64_t recompose(const PrimeFactorization& f) {
  std::uint64_t n = 1;
  for (const auto& [p, e] : f)
    for (std::uint32_t i = 0; i < e; ++i) n *= p;
  return n;
}

// Factorizes every value in [first, first+count) by striding each small prime
// over the range once, and hands fn(value, exponents) the exponent list in
// increasing-prime order. Memory stays O(count + primes); no SPF chains leave
// the range. small_primes must cover sqrt(first+count-1).
template <typename Fn>
void factorize_range(std::uint64_t first, std::uint64_t count,
                     std::span<const std::uint32_t> small_primes, Fn&& fn) {
  if (first == 0) throw std::domain_error("range must start at 1 or above");
  if (count == 0) return;
  if (first > detail::kMaxBulkValue - count + 1)
    throw std::overflow_error("bulk factorization range exceeds supported bound");
  const std::uint64_t hi = first + count - 1;
  const std::uint64_t root = isqrt(hi);
  if (!detail::covers_primes(small_primes, root))
    throw std::invalid_argument("small prime list does not cover sqrt of range end");

  std::vector<std::uint64_t> residual(count);
  std::vector<std::uint64_t> packed(count, 0);
  std::vector<std::uint8_t> nfactors(count, 0);
  for (std::uint64_t i = 0; i < count; ++i) residual[i] = first + i;

  for (std::uint32_t p : small_primes) {
    const std::uint64_t p64 = p;
    if (p64 > root) break;
    std::uint64_t v = ((first + p64 - 1) / p64) * p64;
    for (; v <= hi; v += p64) {
      const std::uint64_t i = v - first;
      std::uint64_t& r = residual[i];
      std::uint32_t e = 0;
      while (r % p64 == 0) {
        r /= p64;
        ++e;
      }
      packed[i] |= static_cast<std::uint64_t>(e) << (6 * nfactors[i]);
      ++nfactors[i];
    }
  }

  std::uint8_t exps[11];
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint8_t k = nfactors[i];
    std::uint64_t bits = packed[i];
    for (std::uint8_t j = 0; j < k; ++j) {
      exps[j] = static_cast<std::uint8_t>(bits & 0x3f);
      bits >>= 6;
    }
    if (residual[i] > 1) exps[k++] = 1;  // one large prime left over
    fn(first + i, std::span<const std::uint8_t>(exps, k));
  }
}

}  // namespace natext
