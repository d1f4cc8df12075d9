#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "natext/corpus.hpp"
#include "natext/lexicon.hpp"
#include "oracles.hpp"

using namespace natext;
namespace fs = std::filesystem;

namespace {

const CorpusReader& corpus_10k() {
  static const CorpusReader reader = [] {
    auto path = fs::temp_directory_path() / "natext-lexicon-tests.nt";
    GenerateOptions opt;
    opt.max_position = 10000;
    generate(path, opt);
    return CorpusReader::open(path);
  }();
  return reader;
}

std::vector<std::string> window_words(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::string> words;
  corpus_10k().window(lo, hi).for_each([&](std::string_view w) { words.emplace_back(w); });
  return words;
}

}  // namespace

TEST_CASE("scan of the first ten positions") {
  auto sc = scan(corpus_10k().window(1, 10), {.checkpoints = {10}, .keep_ids = true});

  SECTION("dictionary is {10, 1100, 1010} in first-appearance order") {
    REQUIRE(sc.lexicon.size() == 3);
    REQUIRE(sc.lexicon.word(0) == "10");
    REQUIRE(sc.lexicon.word(1) == "1100");
    REQUIRE(sc.lexicon.word(2) == "1010");
    REQUIRE(sc.checkpoints[0].distinct == 3);
  }

  SECTION("worked frequencies") {
    REQUIRE(sc.table.frequency("10", sc.lexicon) == 0.4);
    REQUIRE(sc.table.frequency("1010", sc.lexicon) == 0.2);
    REQUIRE(sc.table.frequency("111000", sc.lexicon) == 0.0);
  }

  SECTION("counts sum to n-1 when position 1 is inside") {
    std::uint64_t total = 0;
    for (auto c : sc.table.counts) total += c;
    REQUIRE(total == 9);
  }

  SECTION("the empty word is marked, never interned") {
    REQUIRE(sc.ids[0] == kEmptyWordId);
    REQUIRE(sc.lexicon.find("") == std::nullopt);
  }
}

TEST_CASE("dictionary growth at decade checkpoints") {
  auto sc = scan(corpus_10k().window(1, 10000), {.checkpoints = {10, 100, 1000, 10000}});
  REQUIRE(sc.checkpoints[0].distinct == 3);
  REQUIRE(sc.checkpoints[1].distinct == 12);
  REQUIRE(sc.checkpoints[2].distinct == 29);
  REQUIRE(sc.checkpoints[3].distinct == 63);
  for (std::size_t i = 1; i < sc.checkpoints.size(); ++i)
    REQUIRE(sc.checkpoints[i].distinct >= sc.checkpoints[i - 1].distinct);
}

TEST_CASE("checkpoints outside the window are rejected") {
  REQUIRE_THROWS_AS(scan(corpus_10k().window(5, 100), {.checkpoints = {4}}), std::out_of_range);
  REQUIRE_THROWS_AS(scan(corpus_10k().window(5, 100), {.checkpoints = {101}}), std::out_of_range);
}

TEST_CASE("entropy") {
  SECTION("first ten positions, against a direct summation") {
    auto sc = scan(corpus_10k().window(1, 10));
    const double h = entropy(sc.table);
    double ref = 0;
    for (double p : {0.4, 0.3, 0.2}) ref -= p * std::log2(p);
    REQUIRE(h == Catch::Approx(ref).epsilon(1e-12));
    REQUIRE(h == Catch::Approx(1.5142).margin(5e-5));
  }

  SECTION("about 2.77 bits at one hundred") {
    auto sc = scan(corpus_10k().window(1, 100));
    REQUIRE(entropy(sc.table) == Catch::Approx(2.77).margin(0.01));
  }

  SECTION("degenerate single-word table") {
    FrequencyTable t;
    t.lo = 1;
    t.hi = 7;
    t.counts = {7};
    REQUIRE(entropy(t) == 0.0);
  }

  SECTION("empty dictionary is rejected") {
    FrequencyTable t;
    t.lo = 1;
    t.hi = 1;
    REQUIRE_THROWS_AS(entropy(t), std::domain_error);
  }
}

TEST_CASE("entropy bounds") {
  REQUIRE(entropy_bound(3) == Catch::Approx(1.585).margin(5e-4));
  REQUIRE(entropy_bound(12) == Catch::Approx(3.585).margin(5e-4));
  REQUIRE(entropy_bound(1) == 0.0);
  REQUIRE_THROWS_AS(entropy_bound(0), std::domain_error);
  REQUIRE(fitted_entropy_bound(100) == Catch::Approx(3.207 + 0.234 * std::log2(100.0)));
}

TEST_CASE("entropy stays below the dictionary bound at every checkpoint") {
  auto sc = scan(corpus_10k().window(1, 10000), {.checkpoints = {10, 100, 1000, 10000}});
  for (std::size_t i = 0; i < sc.checkpoints.size(); ++i) {
    auto table = sc.table_at(i);
    REQUIRE(entropy(table) <= entropy_bound(sc.checkpoints[i].distinct));
  }
}

TEST_CASE("rank spectrum") {
  SECTION("first ten positions") {
    auto sc = scan(corpus_10k().window(1, 10));
    auto spec = rank_spectrum(sc.table, sc.lexicon);
    REQUIRE(spec.ranks() == 3);
    REQUIRE(sc.lexicon.word(spec.entries[0].id) == "10");
    REQUIRE(spec.entries[0].frequency == 0.4);
    REQUIRE(sc.lexicon.word(spec.entries[1].id) == "1100");
    REQUIRE(spec.entries[1].frequency == 0.3);
    REQUIRE(sc.lexicon.word(spec.entries[2].id) == "1010");
    REQUIRE(spec.entries[2].frequency == 0.2);
  }

  SECTION("nonincreasing and count-preserving") {
    auto sc = scan(corpus_10k().window(1, 10000));
    auto spec = rank_spectrum(sc.table, sc.lexicon);
    std::multiset<std::uint64_t> from_table(sc.table.counts.begin(), sc.table.counts.end());
    from_table.erase(0);
    std::multiset<std::uint64_t> from_spec;
    for (std::size_t i = 1; i < spec.entries.size(); ++i)
      REQUIRE(spec.entries[i - 1].count >= spec.entries[i].count);
    for (const auto& e : spec.entries) from_spec.insert(e.count);
    REQUIRE(from_table == from_spec);
  }

  SECTION("ties break by first appearance") {
    // Positions 4..6 hold 1100, 10, 1010 once each; appearance order decides.
    auto sc = scan(corpus_10k().window(4, 6));
    auto spec = rank_spectrum(sc.table, sc.lexicon);
    REQUIRE(spec.ranks() == 3);
    REQUIRE(sc.lexicon.word(spec.entries[0].id) == "1100");
    REQUIRE(sc.lexicon.word(spec.entries[1].id) == "10");
    REQUIRE(sc.lexicon.word(spec.entries[2].id) == "1010");
  }

  SECTION("single-word window starting at 1") {
    auto sc = scan(corpus_10k().window(1, 2));
    auto spec = rank_spectrum(sc.table, sc.lexicon);
    REQUIRE(spec.ranks() == 1);
    REQUIRE(spec.entries[0].frequency == 0.5);  // (n-1)/n for n = 2
  }
}

TEST_CASE("phrase counting matches the naive oracle") {
  auto sc = scan(corpus_10k().window(1, 10000), {.keep_ids = true});
  auto words = window_words(1, 10000);

  SECTION("worked phrases") {
    auto check = [&](std::vector<std::string> phrase, std::uint64_t count, std::uint64_t first) {
      auto hits = phrase_count(sc.ids, 1, sc.lexicon, phrase);
      REQUIRE(hits.count == count);
      REQUIRE(hits.first_position == first);
    };
    check({"1100", "1100"}, 1, 8);
    check({"10", "10"}, 1, 2);
    check({"10", "111000"}, 0, 0);
    check({"111000", "10"}, 2, 16);
  }

  SECTION("random phrases against the oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t k = 1 + rng() % 4;
      const std::size_t at = rng() % (words.size() - k);
      std::vector<std::string> phrase(words.begin() + at, words.begin() + at + k);
      if (std::any_of(phrase.begin(), phrase.end(), [](const auto& w) { return w.empty(); }))
        continue;
      auto expect = oracle::phrase_count(words, phrase, 1);
      auto hits = phrase_count(sc.ids, 1, sc.lexicon, phrase);
      REQUIRE(hits.count == expect.first);
      REQUIRE(hits.first_position == expect.second);
    }
  }

  SECTION("absent and empty phrases") {
    auto hits = phrase_count(sc.ids, 1, sc.lexicon, std::vector<std::string>{"1111110000001100"});
    REQUIRE(hits.count == 0);
    REQUIRE_THROWS_AS(phrase_count(sc.ids, 1, sc.lexicon, std::vector<std::string>{}),
                      std::domain_error);
  }
}
