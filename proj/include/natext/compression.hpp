#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

namespace natext {

struct CompressionReport {
  std::uint64_t n = 0;            // words in the measured prefix
  std::uint64_t raw_bytes = 0;    // S: exact lines-format byte count
  std::uint64_t compressed_bytes = 0;  // C: RFC 1952 stream size
  double ratio = 0;               // C / S
  int level = 6;
};

// Streams bytes through deflate with the gzip wrapper and counts the output.
class GzipSizer {
 public:
  explicit GzipSizer(int level) {
    stream_.zalloc = Z_NULL;
    stream_.zfree = Z_NULL;
    stream_.opaque = Z_NULL;
    // windowBits 15+16 selects the RFC 1952 wrapper around raw DEFLATE.
    if (deflateInit2(&stream_, level, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
      throw std::runtime_error("deflate initialization failed");
  }
  GzipSizer(const GzipSizer&) = delete;
  GzipSizer& operator=(const GzipSizer&) = delete;
  ~GzipSizer() {
    if (!finished_) deflateEnd(&stream_);
  }

  void update(std::span<const char> data) {
    stream_.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    stream_.avail_in = static_cast<uInt>(data.size());
    pump(Z_NO_FLUSH);
  }

  std::uint64_t finish() {
    stream_.next_in = Z_NULL;
    stream_.avail_in = 0;
    pump(Z_FINISH);
    deflateEnd(&stream_);
    finished_ = true;
    return total_;
  }

 private:
  void pump(int flush) {
    int rc;
    do {
      stream_.next_out = buffer_;
      stream_.avail_out = sizeof buffer_;
      rc = deflate(&stream_, flush);
      if (rc == Z_STREAM_ERROR) throw std::runtime_error("deflate stream error");
      total_ += sizeof buffer_ - stream_.avail_out;
    } while (stream_.avail_out == 0 || (flush == Z_FINISH && rc != Z_STREAM_END));
  }

  z_stream stream_{};
  Bytef buffer_[1 << 16];
  std::uint64_t total_ = 0;
  bool finished_ = false;
};

inline std::uint64_t gzip_size(std::span<const char> data, int level) {
  GzipSizer sizer(level);
  sizer.update(data);
  return sizer.finish();
}

namespace detail {

// Feeds the first n lines of a lines-format corpus to `sink(chunk)` and
// returns the exact byte count, newlines included.
template <typename Sink>
std::uint64_t stream_lines_prefix(const std::filesystem::path& file, std::uint64_t n, Sink&& sink) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file " + file.string());
  std::vector<char> buf(1 << 20);
  std::uint64_t lines = 0, bytes = 0;
  while (lines < n) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) throw std::runtime_error("corpus file ends before requested prefix");
    std::size_t take = got;
    for (std::size_t i = 0; i < got; ++i) {
      if (buf[i] == '\n' && ++lines == n) {
        take = i + 1;
        break;
      }
    }
    sink(std::span<const char>(buf.data(), take));
    bytes += take;
  }
  return bytes;
}

}  // namespace detail

// CR of the first n words of a lines-format corpus file.
inline CompressionReport compression_ratio(const std::filesystem::path& lines_file,
                                           std::uint64_t n, int level = 6) {
  CompressionReport rep;
  rep.n = n;
  rep.level = level;
  GzipSizer sizer(level);
  rep.raw_bytes = detail::stream_lines_prefix(lines_file, n,
                                              [&](std::span<const char> c) { sizer.update(c); });
  rep.compressed_bytes = sizer.finish();
  rep.ratio = static_cast<double>(rep.compressed_bytes) / static_cast<double>(rep.raw_bytes);
  return rep;
}

inline CompressionReport compression_ratio(std::span<const char> bytes, std::uint64_t n,
                                           int level = 6) {
  CompressionReport rep;
  rep.n = n;
  rep.level = level;
  rep.raw_bytes = bytes.size();
  rep.compressed_bytes = gzip_size(bytes, level);
  rep.ratio = static_cast<double>(rep.compressed_bytes) / static_cast<double>(rep.raw_bytes);
  return rep;
}

// Control with the corpus prefix's exact line-length profile but uniformly
// random content bytes (newline excluded, 255 symbols), fixed seed.
inline CompressionReport random_control_ratio(const std::filesystem::path& lines_file,
                                              std::uint64_t n, int level = 6,
                                              std::uint64_t seed = 0x6e61746578742d31ull) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, 254);
  GzipSizer sizer(level);
  std::uint64_t raw = 0;
  std::vector<char> scratch;
  detail::stream_lines_prefix(lines_file, n, [&](std::span<const char> chunk) {
    scratch.resize(chunk.size());
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (chunk[i] == '\n') {
        scratch[i] = '\n';
      } else {
        int b = dist(rng);
        if (b >= '\n') ++b;
        scratch[i] = static_cast<char>(b);
      }
    }
    sizer.update(scratch);
    raw += chunk.size();
  });
  CompressionReport rep;
  rep.n = n;
  rep.level = level;
  rep.raw_bytes = raw;
  rep.compressed_bytes = sizer.finish();
  rep.ratio = static_cast<double>(rep.compressed_bytes) / static_cast<double>(rep.raw_bytes);
  return rep;
}

}  // namespace natext
