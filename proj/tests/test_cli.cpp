#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

fs::path work_dir() {
  auto d = fs::temp_directory_path() / "natext-cli-tests";
  fs::create_directories(d);
  return d;
}

RunResult run(const std::string& args) {
  const auto out_file = work_dir() / "cmd.out";
  const std::string cmd =
      std::string(NATEXT_BIN) + " " + args + " > " + out_file.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::string output((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WEXITSTATUS(rc), output};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

const fs::path& corpus_1m() {
  static const fs::path p = [] {
    auto path = work_dir() / "c.nt";
    auto r = run("generate --max 1000000 --out " + path.string() + " --threads 2");
    REQUIRE(r.exit_code == 0);
    return path;
  }();
  return p;
}

}  // namespace

TEST_CASE("generate then stats reproduces the dictionary table") {
  auto outdir = work_dir() / "stats";
  auto r = run("stats --in " + corpus_1m().string() + " --checkpoints 1e1..1e6 --out-dir " +
               outdir.string());
  REQUIRE(r.exit_code == 0);
  auto csv = slurp(outdir / "dictionary.csv");
  REQUIRE(csv.find("# manifest: manifest_stats.json") != std::string::npos);
  REQUIRE(csv.find("\n10,3,") != std::string::npos);
  REQUIRE(csv.find("\n100,12,") != std::string::npos);
  REQUIRE(csv.find("\n1000,29,") != std::string::npos);
  // last row: n = 1e6 with 230 distinct words and density 2.3e-4
  REQUIRE(csv.find("\n1000000,230,") != std::string::npos);
  REQUIRE(fs::exists(outdir / "entropy.csv"));
  REQUIRE(fs::exists(outdir / "fits.json"));
  REQUIRE(fs::exists(outdir / "manifest_stats.json"));
}

TEST_CASE("phrase lookups print counts and first positions") {
  auto r = run("phrase --in " + corpus_1m().string() + " --query \"1100 1100\"");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output.find("count=1 first_position=8") != std::string::npos);

  auto never = run("phrase --in " + corpus_1m().string() + " --query \"10 111000\"");
  REQUIRE(never.exit_code == 0);
  REQUIRE(never.output.find("count=0") != std::string::npos);
}

TEST_CASE("zipf emits the rank table of the hundredth position") {
  auto outdir = work_dir() / "zipf";
  auto r = run("zipf --in " + corpus_1m().string() + " --checkpoints 100 --out-dir " +
               outdir.string());
  REQUIRE(r.exit_code == 0);
  auto csv = slurp(outdir / "ranks_100.csv");
  REQUIRE(csv.find("1,1010,") != std::string::npos);
  REQUIRE(csv.find("2,10,") != std::string::npos);
  REQUIRE(csv.find("3,110010,") != std::string::npos);
  REQUIRE(csv.find("4,1100,") != std::string::npos);
  REQUIRE(csv.find("5,101100,") != std::string::npos);
}

TEST_CASE("symmetry writes one row per window and tuple size") {
  auto outdir = work_dir() / "sym";
  auto r = run("symmetry --in " + corpus_1m().string() +
               " --k 2..4 --n 1e3,1e4 --out-dir " + outdir.string());
  REQUIRE(r.exit_code == 0);
  auto csv = slurp(outdir / "symmetry.csv");
  REQUIRE(csv.find("n,k,distinct,reversible,ss,exact,includes_empty_word") != std::string::npos);
  int rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  REQUIRE(rows == 2 + 6);  // comment + header + 2 windows x 3 tuple sizes
}

TEST_CASE("msd rejects malformed words with exit code 2") {
  auto r = run("msd --in " + corpus_1m().string() + " --word doesnotparse");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("malformed word") != std::string::npos);

  auto unbalanced = run("msd --in " + corpus_1m().string() + " --word 10100");
  REQUIRE(unbalanced.exit_code == 2);
}

TEST_CASE("msd and xmsd write curves with fits") {
  auto outdir = work_dir() / "msd";
  auto r = run("msd --in " + corpus_1m().string() + " --word 1010 --tmax 10000 --out-dir " +
               outdir.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(outdir / "msd_1010.csv"));
  REQUIRE(slurp(outdir / "msd_1010_fit.json").find("gamma2") != std::string::npos);

  auto x = run("xmsd --in " + corpus_1m().string() + " --words 10,1010 --tmax 1000 --out-dir " +
               outdir.string());
  REQUIRE(x.exit_code == 0);
  REQUIRE(fs::exists(outdir / "xmsd_10_1010.csv"));
}

TEST_CASE("compress writes ratio rows against a control") {
  auto outdir = work_dir() / "comp";
  auto r = run("compress --in " + corpus_1m().string() +
               " --checkpoints 1e3,1e4 --out-dir " + outdir.string());
  REQUIRE(r.exit_code == 0);
  auto csv = slurp(outdir / "compression.csv");
  REQUIRE(csv.find("n,S,C,CR,level") != std::string::npos);
  REQUIRE(fs::exists(outdir / "compression_control.csv"));
}

TEST_CASE("bad invocations exit with the documented codes") {
  REQUIRE(run("stats").exit_code == 2);                          // missing --in
  REQUIRE(run("nonsense-subcommand").exit_code == 2);            // unknown command
  REQUIRE(run("stats --in /nonexistent/corpus.nt").exit_code == 1);
  REQUIRE(run("generate --max 0 --out /tmp/x.nt").exit_code == 2);
  auto r = run("stats --in " + corpus_1m().string() + " --checkpoints 1e9");
  REQUIRE(r.exit_code == 2);  // checkpoint beyond corpus
}
