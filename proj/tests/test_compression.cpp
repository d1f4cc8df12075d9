#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include <zlib.h>

#include "natext/compression.hpp"
#include "natext/corpus.hpp"

using namespace natext;
namespace fs = std::filesystem;

namespace {

fs::path write_file(const std::string& name, const std::string& content) {
  auto p = fs::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  return p;
}

}  // namespace

TEST_CASE("gzip output is a well-formed RFC 1952 stream") {
  const std::string text = "11001100\n10\n1010\n";
  std::string compressed;
  {
    GzipSizer sizer(6);
    // Re-run through zlib manually to obtain the bytes for inflation.
    z_stream zs{};
    deflateInit2(&zs, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY);
    compressed.resize(deflateBound(&zs, static_cast<uLong>(text.size())) + 32);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(text.data()));
    zs.avail_in = static_cast<uInt>(text.size());
    zs.next_out = reinterpret_cast<Bytef*>(compressed.data());
    zs.avail_out = static_cast<uInt>(compressed.size());
    REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
    compressed.resize(zs.total_out);
    deflateEnd(&zs);
    sizer.update(text);
    REQUIRE(sizer.finish() == compressed.size());
  }
  REQUIRE(static_cast<unsigned char>(compressed[0]) == 0x1f);
  REQUIRE(static_cast<unsigned char>(compressed[1]) == 0x8b);

  // Inflate back.
  std::string restored(text.size() + 16, '\0');
  z_stream zs{};
  inflateInit2(&zs, 15 + 16);
  zs.next_in = reinterpret_cast<Bytef*>(compressed.data());
  zs.avail_in = static_cast<uInt>(compressed.size());
  zs.next_out = reinterpret_cast<Bytef*>(restored.data());
  zs.avail_out = static_cast<uInt>(restored.size());
  REQUIRE(inflate(&zs, Z_FINISH) == Z_STREAM_END);
  restored.resize(zs.total_out);
  inflateEnd(&zs);
  REQUIRE(restored == text);
}

TEST_CASE("identical bytes compress to identical sizes") {
  const std::string text(1 << 18, 'a');
  REQUIRE(gzip_size(text, 6) == gzip_size(text, 6));
}

TEST_CASE("constant lines collapse far below one percent") {
  std::string content;
  content.reserve(5u << 20);
  for (int i = 0; i < 1000000; ++i) content += "1010\n";
  auto p = write_file("natext-const.lines", content);
  auto rep = compression_ratio(p, 1000000, 6);
  REQUIRE(rep.raw_bytes == content.size());
  REQUIRE(rep.ratio < 0.01);
}

TEST_CASE("the random control stays nearly incompressible") {
  GenerateOptions opt;
  opt.max_position = 20000;
  auto p = fs::temp_directory_path() / "natext-compress.nt";
  generate(p, opt);
  auto control = random_control_ratio(p, 20000, 6);
  REQUIRE(control.ratio > 0.9);
  auto corpus = compression_ratio(p, 20000, 6);
  REQUIRE(corpus.raw_bytes == control.raw_bytes);
  REQUIRE(corpus.ratio < control.ratio);
}

TEST_CASE("corpus prefixes gain compressibility between 1e3 and 1e5") {
  GenerateOptions opt;
  opt.max_position = 100000;
  auto p = fs::temp_directory_path() / "natext-compress-large.nt";
  generate(p, opt);
  auto small = compression_ratio(p, 1000, 6);
  auto large = compression_ratio(p, 100000, 6);
  REQUIRE(large.ratio < small.ratio);
  REQUIRE(small.level == 6);
}

TEST_CASE("prefix byte counts are exact") {
  auto p = write_file("natext-prefix.lines", "\n10\n10\n1100\n");
  auto rep = compression_ratio(p, 3, 6);
  REQUIRE(rep.raw_bytes == 7);  // "\n10\n10\n"
  REQUIRE_THROWS(compression_ratio(p, 9, 6));
}
