#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "natext/corpus.hpp"
#include "natext/dyck.hpp"

namespace natext {

// Positions holding the empty word (only position 1) carry this id; the empty
// word is never interned.
inline constexpr std::uint32_t kEmptyWordId = 0xFFFFFFFFu;

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};
struct StringEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept { return a == b; }
};

}  // namespace detail

// Dense word ids in first-appearance order.
class Lexicon {
 public:
  std::uint32_t intern(std::string_view w) {
    if (w.empty()) throw std::domain_error("the empty word is not part of the dictionary");
    if (auto it = map_.find(w); it != map_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(words_.size());
    words_.emplace_back(w);
    map_.emplace(words_.back(), id);
    return id;
  }

  std::optional<std::uint32_t> find(std::string_view w) const {
    auto it = map_.find(w);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& word(std::uint32_t id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  std::deque<std::string> words_;  // stable storage for the map's keys
  std::unordered_map<std::string_view, std::uint32_t, detail::StringHash, detail::StringEq> map_;
};

// Occurrence counts over one window; index = word id.
struct FrequencyTable {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t length() const { return hi - lo + 1; }
  std::uint64_t count(std::uint32_t id) const {
    return id < counts.size() ? counts[id] : 0;
  }
  // Empirical frequency: count over window length (not dictionary mass), so
  // frequencies over a window containing position 1 sum to (n-1)/n.
  double frequency(std::uint32_t id) const {
    return static_cast<double>(count(id)) / static_cast<double>(length());
  }
  double frequency(std::string_view word, const Lexicon& lex) const {
    auto id = lex.find(word);
    return id ? frequency(*id) : 0.0;
  }
};

struct ScanCheckpoint {
  std::uint64_t position = 0;
  std::uint64_t distinct = 0;
  std::vector<std::uint64_t> counts;  // snapshot; ids beyond its size were unseen
};

struct ScanResult {
  Lexicon lexicon;
  FrequencyTable table;
  std::vector<ScanCheckpoint> checkpoints;
  std::vector<std::uint32_t> ids;  // per position when keep_ids, kEmptyWordId for the empty word

  FrequencyTable table_at(std::size_t checkpoint_index) const {
    const auto& cp = checkpoints.at(checkpoint_index);
    return FrequencyTable{table.lo, cp.position, cp.counts};
  }
};

struct ScanOptions {
  std::vector<std::uint64_t> checkpoints;  // positions within the window, ascending
  bool keep_ids = false;
};

// Single sequential pass: interning lexicon, counts, dictionary growth at the
// requested checkpoints.
inline ScanResult scan(const CorpusWindow& window, ScanOptions opt = {}) {
  std::sort(opt.checkpoints.begin(), opt.checkpoints.end());
  for (std::uint64_t c : opt.checkpoints)
    if (c < window.lo() || c > window.hi())
      throw std::out_of_range("checkpoint outside scanned window");

  ScanResult r;
  r.table.lo = window.lo();
  r.table.hi = window.hi();
  if (opt.keep_ids) r.ids.reserve(window.length());

  std::size_t next_cp = 0;
  std::uint64_t pos = window.lo();
  window.for_each([&](std::string_view w) {
    std::uint32_t id = kEmptyWordId;
    if (!w.empty()) {
      id = r.lexicon.intern(w);
      if (id >= r.table.counts.size()) r.table.counts.resize(id + 1, 0);
      ++r.table.counts[id];
    }
    if (opt.keep_ids) r.ids.push_back(id);
    while (next_cp < opt.checkpoints.size() && opt.checkpoints[next_cp] == pos) {
      r.checkpoints.push_back({pos, r.lexicon.size(), r.table.counts});
      ++next_cp;
    }
    ++pos;
  });
  return r;
}

// Plug-in Shannon entropy in bits over the dictionary words of the window.
inline double entropy(const FrequencyTable& table) {
  const double n = static_cast<double>(table.length());
  double h = 0;
  bool any = false;
  for (std::uint64_t c : table.counts) {
    if (c == 0) continue;
    any = true;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  if (!any) throw std::domain_error("entropy of an empty dictionary");
  return h;
}

inline double entropy_bound(std::uint64_t dictionary_size) {
  if (dictionary_size == 0) throw std::domain_error("entropy bound needs a nonempty dictionary");
  return std::log2(static_cast<double>(dictionary_size));
}

// Closed-form bound from the dictionary growth law, valid through 6.5e9.
inline double fitted_entropy_bound(std::uint64_t n) {
  return 3.207 + 0.234 * std::log2(static_cast<double>(n));
}

struct RankEntry {
  std::uint32_t id = 0;
  std::uint64_t count = 0;
  double frequency = 0;
};

// Frequencies in nonincreasing order; equal counts rank the word that
// appeared first in the window ahead (ids are dense in appearance order, so
// the order is total and deterministic).
struct RankSpectrum {
  std::vector<RankEntry> entries;
  std::size_t ranks() const { return entries.size(); }
};

inline RankSpectrum rank_spectrum(const FrequencyTable& table, const Lexicon& lexicon) {
  (void)lexicon;
  RankSpectrum s;
  for (std::uint32_t id = 0; id < table.counts.size(); ++id)
    if (table.counts[id] > 0)
      s.entries.push_back({id, table.counts[id], table.frequency(id)});
  std::sort(s.entries.begin(), s.entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.id < b.id;
  });
  return s;
}

struct PhraseHits {
  std::uint64_t count = 0;
  std::uint64_t first_position = 0;  // 0 when absent
};

// Counts contiguous matches of the phrase inside the scanned window. ids is
// the per-position id sequence of the window starting at window_lo.
inline PhraseHits phrase_count(std::span<const std::uint32_t> ids, std::uint64_t window_lo,
                               const Lexicon& lexicon, std::span<const std::string> phrase) {
  if (phrase.empty()) throw std::domain_error("phrase must contain at least one word");
  std::vector<std::uint32_t> pattern;
  pattern.reserve(phrase.size());
  for (const auto& w : phrase) {
    auto id = lexicon.find(w);
    if (!id) return {};  // word never occurs, so neither does the phrase
    pattern.push_back(*id);
  }
  PhraseHits hits;
  if (ids.size() < pattern.size()) return hits;
  for (std::size_t i = 0; i + pattern.size() <= ids.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < pattern.size(); ++j)
      if (ids[i + j] != pattern[j]) {
        match = false;
        break;
      }
    if (match) {
      ++hits.count;
      if (hits.first_position == 0) hits.first_position = window_lo + i;
    }
  }
  return hits;
}

}  // namespace natext
