#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "natext/dyck.hpp"
#include "natext/factorize.hpp"

namespace natext {

enum class CorpusFormat : std::uint8_t { lines = 0, packed = 1 };

struct CorpusHeader {
  std::uint32_t version = 1;
  CorpusFormat format = CorpusFormat::lines;
  std::uint64_t max_position = 0;
  friend bool operator==(const CorpusHeader&, const CorpusHeader&) = default;
};

// lines: one ASCII word per line, LF-terminated, an empty line for position 1,
//        no header. The byte count of a lines file is the "original size" the
//        compression probe measures.
// packed: 16-byte header (magic "NATX", u8 version, u8 format, u16 reserved,
//        u64 max position, little-endian), then per word a u16 LE bit length
//        followed by ceil(len/8) bytes, bits MSB-first.
// Both formats get a ".idx" sidecar with the byte offset of every 2^16-th
// word for random access.

namespace detail {

inline constexpr char kMagic[4] = {'N', 'A', 'T', 'X'};
inline constexpr char kIndexMagic[4] = {'N', 'A', 'T', 'I'};
inline constexpr std::uint64_t kIndexStride = 1u << 16;

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

inline void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t read_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(p[i]);
  return v;
}

inline std::string header_bytes(const CorpusHeader& h) {
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(h.version));
  out.push_back(static_cast<char>(h.format));
  out.push_back('\0');
  out.push_back('\0');
  append_u64(out, h.max_position);
  return out;
}

inline constexpr std::size_t kHeaderBytes = 16;

inline CorpusHeader parse_header(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw std::runtime_error("not a packed corpus file");
  CorpusHeader h;
  h.version = static_cast<std::uint8_t>(bytes[4]);
  h.format = static_cast<CorpusFormat>(bytes[5]);
  h.max_position = read_u64(bytes.data() + 8);
  if (h.version != 1) throw std::runtime_error("unsupported corpus version");
  return h;
}

// Serializes one word into the payload encoding of the chosen format.
inline void append_record(std::string& out, std::string_view ascii, CorpusFormat f) {
  if (f == CorpusFormat::lines) {
    out += ascii;
    out += '\n';
    return;
  }
  put_u16(out, static_cast<std::uint16_t>(ascii.size()));
  std::uint8_t cur = 0;
  int nb = 0;
  for (char c : ascii) {
    cur = static_cast<std::uint8_t>((cur << 1) | (c == '1'));
    if (++nb == 8) {
      out.push_back(static_cast<char>(cur));
      cur = 0;
      nb = 0;
    }
  }
  if (nb > 0) out.push_back(static_cast<char>(cur << (8 - nb)));
}

}  // namespace detail

// Default statistics checkpoints: {1,2,5} * 10^k up to and including n.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t n) {
  std::vector<std::uint64_t> cps;
  for (std::uint64_t decade = 1; decade <= n && decade != 0; decade *= 10)
    for (std::uint64_t m : {1ull, 2ull, 5ull}) {
      const std::uint64_t c = decade * m;
      if (c <= n && c >= decade) cps.push_back(c);
    }
  if (cps.empty() || cps.back() != n) cps.push_back(n);
  return cps;
}

struct GenerateOptions {
  std::uint64_t max_position = 0;  // N >= 1, required
  CorpusFormat format = CorpusFormat::lines;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::uint64_t segment_length = 1u << 20;
  bool write_index = true;
  std::vector<std::uint64_t> checkpoints;  // empty = default grid
};

struct GenerateReport {
  std::uint64_t words_written = 0;
  std::uint64_t payload_bytes = 0;
  // (position, distinct nonempty words seen up to and including it)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> distinct_checkpoints;
};

namespace detail {

struct SegmentOutput {
  std::string payload;
  std::vector<std::uint64_t> index_offsets;  // relative, for positions = 1 mod stride
  std::vector<std::pair<std::uint64_t, std::string>> distinct;  // (position, word), ordered
};

// One segment of positions [first, first+count], encoded and scanned for
// segment-locally new words.
inline SegmentOutput build_segment_output(std::uint64_t first, std::uint64_t count,
                                          CorpusFormat format,
                                          std::span<const std::uint32_t> primes,
                                          const WordEncoder& encoder) {
  SegmentOutput out;
  out.payload.reserve(count * 8);
  std::unordered_set<std::string> seen;
  std::string word;
  factorize_range(first, count, primes, [&](std::uint64_t value, std::span<const std::uint8_t> exps) {
    word.clear();
    encoder.append_word(word, exps);
    if ((value - 1) % kIndexStride == 0) out.index_offsets.push_back(out.payload.size());
    detail::append_record(out.payload, word, format);
    if (!word.empty() && seen.insert(word).second) out.distinct.emplace_back(value, word);
  });
  return out;
}

}  // namespace detail

// Writes positions 1..N to `out` in order. Segments are generated in parallel
// and merged in base order through a bounded reorder window, so the bytes are
// identical for any worker count. The file is written to "<out>.partial" and
// renamed on success; a leftover .partial marks an aborted run.
inline GenerateReport generate(const std::filesystem::path& out, const GenerateOptions& opt) {
  if (opt.max_position < 1) throw std::domain_error("corpus must contain at least position 1");
  if (opt.max_position > detail::kMaxBulkValue)
    throw std::overflow_error("max position exceeds supported generation range");
  const std::uint64_t n = opt.max_position;
  const std::uint64_t seg_len = std::max<std::uint64_t>(opt.segment_length, 1024);
  const std::uint64_t num_segments = (n + seg_len - 1) / seg_len;
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, num_segments));

  const auto primes = simple_primes(static_cast<std::uint32_t>(isqrt(n)) + 1);
  const WordEncoder encoder;

  std::vector<std::uint64_t> checkpoints =
      opt.checkpoints.empty() ? default_checkpoints(n) : opt.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  for (std::uint64_t c : checkpoints)
    if (c < 1 || c > n) throw std::out_of_range("checkpoint outside generated range");

  const std::filesystem::path partial = out.string() + ".partial";
  std::ofstream sink(partial, std::ios::binary | std::ios::trunc);
  if (!sink) throw std::runtime_error("cannot open output file " + partial.string());

  GenerateReport report;
  std::vector<std::uint64_t> index_offsets;
  std::uint64_t payload_base = 0;
  if (opt.format == CorpusFormat::packed) {
    const auto hdr = detail::header_bytes({1, CorpusFormat::packed, n});
    sink.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
    payload_base = hdr.size();
  }

  // Merge state.
  std::unordered_set<std::string> dictionary;
  std::size_t next_checkpoint = 0;
  auto flush_checkpoints_below = [&](std::uint64_t position) {
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] < position) {
      report.distinct_checkpoints.emplace_back(checkpoints[next_checkpoint], dictionary.size());
      ++next_checkpoint;
    }
  };

  std::mutex mu;
  std::condition_variable cv_produce, cv_consume;
  std::map<std::uint64_t, detail::SegmentOutput> ready;
  std::uint64_t next_to_claim = 0;
  std::uint64_t next_to_write = 0;
  const std::uint64_t window = threads + 2;
  std::exception_ptr worker_error;

  auto worker = [&] {
    for (;;) {
      std::uint64_t seg;
      {
        std::unique_lock lock(mu);
        cv_produce.wait(lock, [&] {
          return worker_error || next_to_claim >= num_segments ||
                 next_to_claim < next_to_write + window;
        });
        if (worker_error || next_to_claim >= num_segments) return;
        seg = next_to_claim++;
      }
      try {
        const std::uint64_t first = 1 + seg * seg_len;
        const std::uint64_t count = std::min(seg_len, n - first + 1);
        auto result = detail::build_segment_output(first, count, opt.format, primes, encoder);
        std::lock_guard lock(mu);
        ready.emplace(seg, std::move(result));
        cv_consume.notify_one();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!worker_error) worker_error = std::current_exception();
        cv_consume.notify_one();
        cv_produce.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);

  try {
    std::uint64_t payload_bytes = 0;
    while (next_to_write < num_segments) {
      detail::SegmentOutput seg;
      {
        std::unique_lock lock(mu);
        cv_consume.wait(lock, [&] { return worker_error || ready.contains(next_to_write); });
        if (worker_error) std::rethrow_exception(worker_error);
        auto it = ready.find(next_to_write);
        seg = std::move(it->second);
        ready.erase(it);
      }
      for (std::uint64_t rel : seg.index_offsets) index_offsets.push_back(payload_bytes + rel);
      for (auto& [pos, word] : seg.distinct) {
        flush_checkpoints_below(pos);  // checkpoints strictly before this insertion
        dictionary.insert(std::move(word));
      }
      sink.write(seg.payload.data(), static_cast<std::streamsize>(seg.payload.size()));
      if (!sink) throw std::runtime_error("write failure while generating corpus");
      payload_bytes += seg.payload.size();
      ++next_to_write;
      cv_produce.notify_all();
    }
    flush_checkpoints_below(n + 1);
    report.words_written = n;
    report.payload_bytes = payload_bytes;
  } catch (...) {
    {
      std::lock_guard lock(mu);
      if (!worker_error) worker_error = std::current_exception();
    }
    cv_produce.notify_all();
    for (auto& t : pool) t.join();
    throw;
  }
  for (auto& t : pool) t.join();
  if (worker_error) std::rethrow_exception(worker_error);

  sink.close();
  if (!sink) throw std::runtime_error("close failure while generating corpus");
  std::filesystem::rename(partial, out);

  if (opt.write_index) {
    std::string idx(detail::kIndexMagic, 4);
    idx.push_back(1);
    idx.push_back(static_cast<char>(opt.format));
    idx.push_back('\0');
    idx.push_back('\0');
    detail::append_u64(idx, n);
    detail::append_u64(idx, detail::kIndexStride);
    for (std::uint64_t off : index_offsets) detail::append_u64(idx, payload_base + off);
    detail::append_u64(idx, payload_base + report.payload_bytes);
    std::ofstream f(out.string() + ".idx", std::ios::binary | std::ios::trunc);
    f.write(idx.data(), static_cast<std::streamsize>(idx.size()));
    if (!f) throw std::runtime_error("cannot write index sidecar");
  }
  return report;
}

class CorpusWindow;

// Read access to a generated corpus file in either format.
class CorpusReader {
 public:
  static CorpusReader open(const std::filesystem::path& file) {
    CorpusReader r;
    r.path_ = file;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file " + file.string());
    char head[detail::kHeaderBytes];
    in.read(head, sizeof head);
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got >= 4 && std::memcmp(head, detail::kMagic, 4) == 0) {
      if (got < detail::kHeaderBytes) throw std::runtime_error("truncated corpus header");
      r.header_ = detail::parse_header({head, got});
      r.payload_base_ = detail::kHeaderBytes;
    } else {
      r.header_.format = CorpusFormat::lines;
      r.payload_base_ = 0;
    }
    r.load_index();
    if (r.header_.format == CorpusFormat::lines && r.header_.max_position == 0)
      r.header_.max_position = r.count_lines();
    return r;
  }

  const CorpusHeader& header() const { return header_; }
  std::uint64_t max_position() const { return header_.max_position; }
  const std::filesystem::path& path() const { return path_; }

  CorpusWindow window(std::uint64_t lo, std::uint64_t hi) const;

  // Byte offset of the record for `position`, plus how many records to skip
  // after seeking there.
  std::pair<std::uint64_t, std::uint64_t> locate(std::uint64_t position) const {
    if (position < 1 || position > header_.max_position)
      throw std::out_of_range("position outside corpus");
    if (!index_.empty()) {
      const std::uint64_t slot = (position - 1) / detail::kIndexStride;
      if (slot < index_.size())
        return {index_[slot], (position - 1) % detail::kIndexStride};
    }
    return {payload_base_, position - 1};
  }

  std::string word_at(std::uint64_t position) const;

 private:
  void load_index() {
    std::ifstream in(path_.string() + ".idx", std::ios::binary);
    if (!in) return;
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 24 || std::memcmp(bytes.data(), detail::kIndexMagic, 4) != 0) return;
    const std::uint64_t n = detail::read_u64(bytes.data() + 8);
    const std::uint64_t stride = detail::read_u64(bytes.data() + 16);
    if (stride != detail::kIndexStride) return;
    const std::size_t entries = (bytes.size() - 24) / 8;
    if (entries < 1) return;
    index_.reserve(entries - 1);
    for (std::size_t i = 0; i + 1 < entries; ++i)
      index_.push_back(detail::read_u64(bytes.data() + 24 + 8 * i));
    if (header_.max_position == 0) header_.max_position = n;
  }

  std::uint64_t count_lines() const {
    std::ifstream in(path_, std::ios::binary);
    std::uint64_t lines = 0;
    std::vector<char> buf(1 << 20);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      const auto got = static_cast<std::size_t>(in.gcount());
      for (std::size_t i = 0; i < got; ++i)
        if (buf[i] == '\n') ++lines;
      if (got == 0) break;
    }
    return lines;
  }

  std::filesystem::path path_;
  CorpusHeader header_;
  std::uint64_t payload_base_ = 0;
  std::vector<std::uint64_t> index_;
};

// Slice [lo, hi] of a corpus. for_each streams the words in order through a
// callback taking std::string_view (valid only during the call); each call to
// for_each opens its own stream, so windows are safe to read concurrently.
class CorpusWindow {
 public:
  CorpusWindow(const CorpusReader& reader, std::uint64_t lo, std::uint64_t hi)
      : reader_(&reader), lo_(lo), hi_(hi) {
    if (lo < 1 || lo > hi || hi > reader.max_position())
      throw std::out_of_range("window outside corpus positions");
  }

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t length() const { return hi_ - lo_ + 1; }
  const CorpusReader& reader() const { return *reader_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::ifstream in(reader_->path(), std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file " + reader_->path().string());
    auto [offset, skip] = reader_->locate(lo_);
    in.seekg(static_cast<std::streamoff>(offset));
    if (reader_->header().format == CorpusFormat::lines)
      stream_lines(in, skip, std::forward<Fn>(fn));
    else
      stream_packed(in, skip, std::forward<Fn>(fn));
  }

 private:
  template <typename Fn>
  void stream_lines(std::ifstream& in, std::uint64_t skip, Fn&& fn) const {
    std::string line;
    std::uint64_t pos = lo_ - skip;
    while (pos <= hi_ && std::getline(in, line)) {
      if (pos >= lo_) fn(std::string_view(line));
      ++pos;
    }
    if (pos <= hi_)
      throw std::runtime_error("corpus file ends before position " + std::to_string(pos));
  }

  template <typename Fn>
  void stream_packed(std::ifstream& in, std::uint64_t skip, Fn&& fn) const {
    std::uint64_t pos = lo_ - skip;
    std::string ascii;
    char lenbuf[2];
    std::vector<char> payload(64);
    while (pos <= hi_) {
      in.read(lenbuf, 2);
      if (in.gcount() != 2)
        throw std::runtime_error("corrupt packed corpus: truncated length at position " +
                                 std::to_string(pos));
      const std::uint16_t bits = static_cast<std::uint8_t>(lenbuf[0]) |
                                 (static_cast<std::uint16_t>(static_cast<std::uint8_t>(lenbuf[1])) << 8);
      if (bits % 2 != 0)
        throw std::runtime_error("corrupt packed corpus: odd bit length at position " +
                                 std::to_string(pos));
      const std::size_t nbytes = (bits + 7) / 8;
      if (payload.size() < nbytes) payload.resize(nbytes);
      in.read(payload.data(), static_cast<std::streamsize>(nbytes));
      if (static_cast<std::size_t>(in.gcount()) != nbytes)
        throw std::runtime_error("corrupt packed corpus: truncated record at position " +
                                 std::to_string(pos));
      if (pos >= lo_) {
        ascii.assign(bits, '0');
        for (std::uint16_t i = 0; i < bits; ++i)
          if ((static_cast<std::uint8_t>(payload[i / 8]) >> (7 - i % 8)) & 1u) ascii[i] = '1';
        fn(std::string_view(ascii));
      }
      ++pos;
    }
  }

  const CorpusReader* reader_;
  std::uint64_t lo_, hi_;
};

inline CorpusWindow CorpusReader::window(std::uint64_t lo, std::uint64_t hi) const {
  return CorpusWindow(*this, lo, hi);
}

inline std::string CorpusReader::word_at(std::uint64_t position) const {
  std::string out;
  CorpusWindow w(*this, position, position);
  w.for_each([&](std::string_view v) { out.assign(v); });
  return out;
}

}  // namespace natext
