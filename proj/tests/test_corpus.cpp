#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>

#include "natext/corpus.hpp"
#include "oracles.hpp"

using namespace natext;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto d = fs::temp_directory_path() / "natext-corpus-tests";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> read_all(const CorpusReader& r) {
  std::vector<std::string> words;
  r.window(1, r.max_position()).for_each([&](std::string_view w) { words.emplace_back(w); });
  return words;
}

}  // namespace

TEST_CASE("the first ten positions") {
  auto path = temp_dir() / "ten.nt";
  GenerateOptions opt;
  opt.max_position = 10;
  generate(path, opt);
  REQUIRE(slurp(path) == "\n10\n10\n1100\n10\n1010\n10\n1100\n1100\n1010\n");
}

TEST_CASE("a corpus of one position is a single empty line") {
  auto path = temp_dir() / "one.nt";
  GenerateOptions opt;
  opt.max_position = 1;
  generate(path, opt);
  REQUIRE(slurp(path) == "\n");
  auto reader = CorpusReader::open(path);
  REQUIRE(reader.max_position() == 1);
  std::vector<std::string> words = read_all(reader);
  REQUIRE(words == std::vector<std::string>{""});
}

TEST_CASE("generation is byte-identical across worker counts") {
  for (auto format : {CorpusFormat::lines, CorpusFormat::packed}) {
    GenerateOptions a;
    a.max_position = 100000;
    a.format = format;
    a.threads = 1;
    a.segment_length = 4096;  // force many segments through the reorder window
    auto pa = temp_dir() / "t1.nt";
    generate(pa, a);

    GenerateOptions b = a;
    b.threads = 8;
    auto pb = temp_dir() / "t8.nt";
    generate(pb, b);

    REQUIRE(slurp(pa) == slurp(pb));
    REQUIRE(slurp(pa.string() + ".idx") == slurp(pb.string() + ".idx"));
  }
}

TEST_CASE("lines and packed variants decode to the same words") {
  GenerateOptions a;
  a.max_position = 10000;
  auto pl = temp_dir() / "v.lines.nt";
  generate(pl, a);
  a.format = CorpusFormat::packed;
  auto pp = temp_dir() / "v.packed.nt";
  generate(pp, a);

  auto rl = CorpusReader::open(pl);
  auto rp = CorpusReader::open(pp);
  REQUIRE(rp.header().format == CorpusFormat::packed);
  REQUIRE(rp.header().max_position == 10000);
  REQUIRE(read_all(rl) == read_all(rp));
}

TEST_CASE("regenerating reproduces the file byte for byte") {
  GenerateOptions opt;
  opt.max_position = 100000;
  opt.segment_length = 1 << 14;
  auto p1 = temp_dir() / "r1.nt";
  auto p2 = temp_dir() / "r2.nt";
  generate(p1, opt);
  generate(p2, opt);
  REQUIRE(slurp(p1) == slurp(p2));

  // Every stored word equals a from-scratch encoding.
  auto reader = CorpusReader::open(p1);
  std::uint64_t pos = 1;
  reader.window(1, 1000).for_each([&](std::string_view w) {
    REQUIRE(w == oracle::word_of(pos));
    ++pos;
  });
}

TEST_CASE("windows slice the text exactly") {
  auto path = temp_dir() / "win.nt";
  GenerateOptions opt;
  opt.max_position = 10;
  generate(path, opt);
  auto reader = CorpusReader::open(path);

  SECTION("positions 2..10") {
    std::vector<std::string> words;
    reader.window(2, 10).for_each([&](std::string_view w) { words.emplace_back(w); });
    REQUIRE(words.size() == 9);
    REQUIRE(words[0] == "10");
    REQUIRE(words[1] == "10");
    REQUIRE(words[2] == "1100");
  }

  SECTION("the single first position") {
    std::vector<std::string> words;
    reader.window(1, 1).for_each([&](std::string_view w) { words.emplace_back(w); });
    REQUIRE(words == std::vector<std::string>{""});
  }

  SECTION("positions 5..7") {
    std::vector<std::string> words;
    reader.window(5, 7).for_each([&](std::string_view w) { words.emplace_back(w); });
    REQUIRE(words == std::vector<std::string>{"10", "1010", "10"});
  }

  SECTION("out-of-range windows are rejected") {
    REQUIRE_THROWS_AS(reader.window(0, 5), std::out_of_range);
    REQUIRE_THROWS_AS(reader.window(5, 11), std::out_of_range);
    REQUIRE_THROWS_AS(reader.window(7, 6), std::out_of_range);
  }
}

TEST_CASE("random access agrees with sequential reads") {
  for (auto format : {CorpusFormat::lines, CorpusFormat::packed}) {
    GenerateOptions opt;
    opt.max_position = 200000;  // spans several index stride points
    opt.format = format;
    auto path = temp_dir() / (format == CorpusFormat::lines ? "ra.lines.nt" : "ra.packed.nt");
    generate(path, opt);
    auto reader = CorpusReader::open(path);
    for (std::uint64_t pos : {1ull, 2ull, 65536ull, 65537ull, 65538ull, 131073ull, 200000ull})
      REQUIRE(reader.word_at(pos) == oracle::word_of(pos));
  }
}

TEST_CASE("lines format stays readable without its index sidecar") {
  GenerateOptions opt;
  opt.max_position = 2000;
  opt.write_index = false;
  auto path = temp_dir() / "noidx.nt";
  generate(path, opt);
  REQUIRE_FALSE(fs::exists(path.string() + ".idx"));
  auto reader = CorpusReader::open(path);
  REQUIRE(reader.max_position() == 2000);
  REQUIRE(reader.word_at(1977) == oracle::word_of(1977));
}

TEST_CASE("generation report tracks dictionary growth") {
  GenerateOptions opt;
  opt.max_position = 100000;
  opt.segment_length = 4096;
  opt.threads = 4;
  auto path = temp_dir() / "cp.nt";
  auto report = generate(path, opt);
  REQUIRE(report.words_written == 100000);

  std::map<std::uint64_t, std::uint64_t> d(report.distinct_checkpoints.begin(),
                                           report.distinct_checkpoints.end());
  REQUIRE(d.at(1) == 0);  // the empty word is not dictionary material
  REQUIRE(d.at(10) == 3);
  REQUIRE(d.at(100) == 12);
  REQUIRE(d.at(1000) == 29);
  REQUIRE(d.at(10000) == 63);
  REQUIRE(d.at(100000) == 123);
}

TEST_CASE("packed header round-trips") {
  GenerateOptions opt;
  opt.max_position = 321;
  opt.format = CorpusFormat::packed;
  auto path = temp_dir() / "hdr.nt";
  generate(path, opt);
  auto reader = CorpusReader::open(path);
  REQUIRE(reader.header() == CorpusHeader{1, CorpusFormat::packed, 321});
}

TEST_CASE("a truncated packed record reports its position") {
  GenerateOptions opt;
  opt.max_position = 1000;
  opt.format = CorpusFormat::packed;
  opt.write_index = false;
  auto path = temp_dir() / "trunc.nt";
  generate(path, opt);
  auto bytes = slurp(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 1));
  out.close();
  auto reader = CorpusReader::open(path);
  REQUIRE_THROWS_WITH(read_all(reader), Catch::Matchers::ContainsSubstring("position"));
}

TEST_CASE("oversized requests are rejected up front") {
  GenerateOptions opt;
  opt.max_position = 0;
  REQUIRE_THROWS_AS(generate(temp_dir() / "zero.nt", opt), std::domain_error);
  opt.max_position = detail::kMaxBulkValue + 1;
  REQUIRE_THROWS_AS(generate(temp_dir() / "huge.nt", opt), std::overflow_error);
}
