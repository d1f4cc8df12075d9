#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "natext/lexicon.hpp"

namespace natext {

// Indicator signal of one word over a window: which positions hold it.
// Positions are 1-based relative to the window start.
struct WalkSignal {
  std::string word;
  std::uint64_t window_length = 0;
  std::vector<std::uint64_t> positions;  // strictly increasing

  double mean() const {
    return static_cast<double>(positions.size()) / static_cast<double>(window_length);
  }
};

inline WalkSignal make_signal(std::span<const std::uint32_t> ids, std::uint32_t word_id,
                              std::string word) {
  WalkSignal s;
  s.word = std::move(word);
  s.window_length = ids.size();
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == word_id) s.positions.push_back(i + 1);
  return s;
}

// Absent words get an empty signal rather than an error.
inline WalkSignal make_signal(const ScanResult& scan, std::string_view word) {
  auto id = scan.lexicon.find(word);
  return make_signal(scan.ids, id ? *id : kEmptyWordId - 1, std::string(word));
}

// Log-spaced integer lags, deduplicated, from 1 up to t_max.
inline std::vector<std::uint64_t> log_lag_grid(std::uint64_t t_max, unsigned per_decade = 16) {
  std::vector<std::uint64_t> lags;
  if (t_max < 1) return lags;
  for (unsigned j = 0;; ++j) {
    const double v = std::pow(10.0, static_cast<double>(j) / per_decade);
    const auto t = static_cast<std::uint64_t>(std::llround(v));
    if (t > t_max) break;
    if (lags.empty() || t > lags.back()) lags.push_back(std::max<std::uint64_t>(t, 1));
  }
  return lags;
}

struct MsdCurve {
  std::string source;  // "<word>" or "<word1>,<word2>"
  std::vector<std::uint64_t> lags;
  std::vector<double> values;
};

namespace detail {

struct KahanSum {
  double sum = 0, carry = 0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// MSD over one lag from a prefix-occurrence-count array Z (Z[m] = occurrences
// at positions <= m, Z[0] = 0). Displacements start at n = 1, so the first
// window is positions [2, 1+t]; the prefix value is combined with the drift
// mu*t at use to avoid cancellation.
template <typename Count>
double msd_one_lag(std::span<const Count> prefix, double mu, std::uint64_t t) {
  const std::uint64_t n_max = prefix.size() - 1;  // window length
  const double drift = mu * static_cast<double>(t);
  KahanSum acc;
  for (std::uint64_t n = 1; n + t <= n_max; ++n) {
    const double d = static_cast<double>(prefix[n + t] - prefix[n]) - drift;
    acc.add(d * d);
  }
  return acc.sum / static_cast<double>(n_max - t);
}

template <typename Count>
std::vector<Count> prefix_counts(const WalkSignal& s) {
  std::vector<Count> z(s.window_length + 1, 0);
  for (std::uint64_t p : s.positions) z[p] = 1;
  Count running = 0;
  for (std::uint64_t m = 1; m <= s.window_length; ++m) {
    running += z[m];
    z[m] = running;
  }
  return z;
}

inline void check_lags(std::span<const std::uint64_t> lags, std::uint64_t n) {
  for (std::uint64_t t : lags)
    if (t < 1 || t >= n) throw std::out_of_range("lag outside [1, window length - 1]");
}

// One worker per stripe of lags; each lag is summed sequentially, so results
// do not depend on the thread count.
template <typename Fn>
void run_lags(std::size_t n_lags, unsigned threads, Fn&& per_lag) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_lags));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n_lags; ++i) per_lag(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n_lags; i += threads) per_lag(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Mean square displacement of the centered indicator walk at the given lags.
inline MsdCurve msd(const WalkSignal& signal, std::span<const std::uint64_t> lags,
                    unsigned threads = 0) {
  detail::check_lags(lags, signal.window_length);
  MsdCurve curve;
  curve.source = signal.word;
  curve.lags.assign(lags.begin(), lags.end());
  curve.values.resize(lags.size());
  const double mu = signal.mean();
  if (signal.window_length < 0xFFFFFFFFull) {
    const auto prefix = detail::prefix_counts<std::uint32_t>(signal);
    detail::run_lags(lags.size(), threads, [&](std::size_t i) {
      curve.values[i] = detail::msd_one_lag<std::uint32_t>(prefix, mu, lags[i]);
    });
  } else {
    const auto prefix = detail::prefix_counts<std::uint64_t>(signal);
    detail::run_lags(lags.size(), threads, [&](std::size_t i) {
      curve.values[i] = detail::msd_one_lag<std::uint64_t>(prefix, mu, lags[i]);
    });
  }
  return curve;
}

// Cross correlation of two walks over the same window: mean square of the
// difference of their lag-t displacements. Symmetric, zero for equal signals.
inline MsdCurve cross_msd(const WalkSignal& a, const WalkSignal& b,
                          std::span<const std::uint64_t> lags, unsigned threads = 0) {
  if (a.window_length != b.window_length)
    throw std::domain_error("cross correlation needs signals over the same window");
  detail::check_lags(lags, a.window_length);
  MsdCurve curve;
  curve.source = a.word + "," + b.word;
  curve.lags.assign(lags.begin(), lags.end());
  curve.values.resize(lags.size());

  // Signed difference of the two occurrence prefix counts.
  std::vector<std::int64_t> diff(a.window_length + 1, 0);
  for (std::uint64_t p : a.positions) ++diff[p];
  for (std::uint64_t p : b.positions) --diff[p];
  std::int64_t running = 0;
  for (std::uint64_t m = 1; m <= a.window_length; ++m) {
    running += diff[m];
    diff[m] = running;
  }
  const double mu = a.mean() - b.mean();
  detail::run_lags(lags.size(), threads, [&](std::size_t i) {
    curve.values[i] = detail::msd_one_lag<std::int64_t>(diff, mu, lags[i]);
  });
  return curve;
}

}  // namespace natext
