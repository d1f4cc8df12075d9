// natext: generate the prime-encoded Dyck-word text and reproduce its
// statistics as figure-ready CSV/JSON artifacts.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "natext/compression.hpp"
#include "natext/corpus.hpp"
#include "natext/dyck.hpp"
#include "natext/factorize.hpp"
#include "natext/fit.hpp"
#include "natext/lexicon.hpp"
#include "natext/symmetry.hpp"
#include "natext/tables.hpp"
#include "natext/walks.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace natext;

namespace {

constexpr const char* kVersion = "natext 1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t parse_count(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || v < 1 || v > 9.2e18 || v != std::floor(v))
      throw std::invalid_argument(s);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw UsageError("not a positive integer count: '" + s + "'");
  }
}

// Checkpoint specs: comma-separated entries, each either one position or a
// range "A..B" expanded to the {1,2,5}*10^k grid inside [A, B].
std::vector<std::uint64_t> parse_checkpoints(const std::string& spec, std::uint64_t max_n) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_count(item));
      continue;
    }
    const std::uint64_t lo = parse_count(item.substr(0, dots));
    const std::uint64_t hi = parse_count(item.substr(dots + 2));
    if (lo > hi) throw UsageError("empty checkpoint range: '" + item + "'");
    for (std::uint64_t decade = 1; decade <= hi && decade != 0; decade *= 10)
      for (std::uint64_t m : {1ull, 2ull, 5ull}) {
        const std::uint64_t c = decade * m;
        if (c >= lo && c <= hi && c >= decade) out.push_back(c);
      }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw UsageError("checkpoint list is empty");
  for (std::uint64_t c : out)
    if (c > max_n)
      throw UsageError("checkpoint " + std::to_string(c) + " exceeds corpus length " +
                       std::to_string(max_n));
  return out;
}

std::vector<std::uint32_t> parse_k_list(const std::string& spec) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<std::uint32_t>(parse_count(item)));
      continue;
    }
    const auto lo = parse_count(item.substr(0, dots));
    const auto hi = parse_count(item.substr(dots + 2));
    for (std::uint64_t k = lo; k <= hi; ++k) out.push_back(static_cast<std::uint32_t>(k));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw UsageError("tuple size list is empty");
  return out;
}

std::string validated_word(const std::string& s) {
  DyckWord w;
  try {
    w = DyckWord::from_ascii(s);
  } catch (const std::invalid_argument&) {
    throw UsageError("malformed word '" + s + "': words use characters 1 and 0");
  }
  if (s.empty() || !w.valid())
    throw UsageError("malformed word '" + s + "': not a balanced nonempty sequence");
  return s;
}

std::vector<std::string> split_words(const std::string& spec, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(validated_word(item));
  if (out.empty()) throw UsageError("no words given");
  return out;
}

std::uint64_t fnv1a_digest(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<std::uint8_t>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

// Every run writes one manifest; emitted CSVs carry a comment line naming it.
class RunManifest {
 public:
  RunManifest(std::string command, fs::path out_dir, std::vector<std::string> argv)
      : command_(std::move(command)), out_dir_(std::move(out_dir)), start_(clock::now()) {
    doc_["tool"] = kVersion;
    doc_["command"] = command_;
    doc_["argv"] = argv;
    fs::create_directories(out_dir_);
  }

  void set_corpus(const fs::path& file) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016" PRIx64, fnv1a_digest(file));
    doc_["corpus"] = file.string();
    doc_["corpus_digest"] = buf;
  }

  json& parameters() { return doc_["parameters"]; }

  std::string file_name() const { return "manifest_" + command_ + ".json"; }

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    std::ofstream out(out_dir_ / name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (out_dir_ / name).string());
    out << "# manifest: " << file_name() << "\n" << header << "\n";
    doc_["outputs"].push_back(name);
    return out;
  }

  void write_json(const std::string& name, const json& payload) {
    std::ofstream out(out_dir_ / name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (out_dir_ / name).string());
    json wrapped = payload;
    wrapped["manifest"] = file_name();
    out << wrapped.dump(1) << "\n";
    doc_["outputs"].push_back(name);
  }

  void finish() {
    doc_["wall_seconds"] =
        std::chrono::duration<double>(clock::now() - start_).count();
    std::ofstream out(out_dir_ / file_name(), std::ios::trunc);
    out << doc_.dump(1) << "\n";
  }

  const fs::path& dir() const { return out_dir_; }

 private:
  using clock = std::chrono::steady_clock;
  std::string command_;
  fs::path out_dir_;
  clock::time_point start_;
  json doc_;
};

json fit_to_json(const PowerLawFit& f, const char* weighting) {
  return {{"model", "K*n^beta"},         {"weighting", weighting},
          {"K", f.amplitude},            {"beta", f.exponent},
          {"r2", f.r2},                  {"se_log_K", f.se_log_amplitude},
          {"se_beta", f.se_exponent}};
}

json fit_to_json(const SegmentedFit& f) {
  return {{"model", "two-segment power law"},
          {"gamma1", f.gamma1},
          {"gamma2", f.gamma2},
          {"crossover", f.crossover},
          {"crossover_detected", f.crossover_detected},
          {"intercept1_log10", f.intercept1},
          {"intercept2_log10", f.intercept2},
          {"r2_low", f.r2_low},
          {"r2_high", f.r2_high},
          {"sse", f.sse},
          {"half_width1", f.half_width1},
          {"half_width2", f.half_width2}};
}

// ---------------------------------------------------------------------------
// Shared analysis steps
// ---------------------------------------------------------------------------

struct StatsArtifacts {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> distinct;
  std::vector<double> entropies;
  PowerLawFit heaps_linear;
  PowerLawFit heaps_log;
};

StatsArtifacts write_stats(RunManifest& man, const ScanResult& sc) {
  StatsArtifacts art;
  auto dict = man.open_csv("dictionary.csv", "n,d_n,delta_n");
  auto entr = man.open_csv("entropy.csv", "n,h,log2_d,fitted_bound");
  for (std::size_t i = 0; i < sc.checkpoints.size(); ++i) {
    const auto& cp = sc.checkpoints[i];
    art.checkpoints.push_back(cp.position);
    art.distinct.push_back(cp.distinct);
    dict << cp.position << ',' << cp.distinct << ','
         << fmt_double(static_cast<double>(cp.distinct) / static_cast<double>(cp.position))
         << '\n';
    const auto table = sc.table_at(i);
    const double h = cp.distinct > 0 ? entropy(table) : 0.0;
    art.entropies.push_back(h);
    entr << cp.position << ',' << fmt_double(h) << ','
         << fmt_double(cp.distinct > 0 ? entropy_bound(cp.distinct) : 0.0) << ','
         << fmt_double(fitted_entropy_bound(cp.position)) << '\n';
  }

  std::vector<double> n, d, hn, hv;
  for (std::size_t i = 0; i < art.checkpoints.size(); ++i) {
    if (art.checkpoints[i] >= 10 && art.distinct[i] > 0) {
      n.push_back(static_cast<double>(art.checkpoints[i]));
      d.push_back(static_cast<double>(art.distinct[i]));
      if (art.checkpoints[i] >= 100) {
        hn.push_back(static_cast<double>(art.checkpoints[i]));
        hv.push_back(art.entropies[i]);
      }
    }
  }
  json fits;
  if (n.size() >= 3) {
    art.heaps_linear = fit_power_law(n, d, PowerLawWeighting::linear_scale);
    art.heaps_log = fit_power_law(n, d, PowerLawWeighting::log_equal);
    fits["dictionary_power_law"] = fit_to_json(art.heaps_linear, "linear_scale");
    fits["dictionary_power_law_log_equal"] = fit_to_json(art.heaps_log, "log_equal");
  }
  if (hn.size() >= 3) {
    auto eg = fit_entropy_growth(hn, hv);
    fits["entropy_growth"] = {{"model", "a+b*log2(log2 n)"},
                              {"a", eg.offset},
                              {"b", eg.slope},
                              {"r2", eg.r2}};
  }
  if (!fits.empty()) man.write_json("fits.json", fits);
  return art;
}

void write_zipf(RunManifest& man, const ScanResult& sc, double log_base) {
  json fits = json::array();
  for (std::size_t i = 0; i < sc.checkpoints.size(); ++i) {
    const auto& cp = sc.checkpoints[i];
    if (cp.distinct == 0) continue;
    auto table = sc.table_at(i);
    auto spectrum = rank_spectrum(table, sc.lexicon);
    auto csv = man.open_csv("ranks_" + std::to_string(cp.position) + ".csv",
                            "rank,word,frequency");
    for (std::size_t r = 0; r < spectrum.ranks(); ++r)
      csv << (r + 1) << ',' << sc.lexicon.word(spectrum.entries[r].id) << ','
          << fmt_double(spectrum.entries[r].frequency) << '\n';
    json row{{"n", cp.position},
             {"ranks", spectrum.ranks()},
             {"f1", spectrum.entries[0].frequency},
             {"f2", spectrum.ranks() > 1 ? spectrum.entries[1].frequency : 0.0}};
    if (spectrum.ranks() >= 4) {
      auto q = fit_zipf_quadratic(spectrum, log_base);
      auto qe = fit_zipf_quadratic(spectrum, std::exp(1.0));
      auto q10 = fit_zipf_quadratic(spectrum, 10.0);
      row["fit"] = {{"log_base", q.log_base}, {"a", q.quadratic}, {"b", q.linear},
                    {"c", q.constant},        {"r2", q.r2}};
      row["fit_base10"] = {{"a", q10.quadratic}, {"b", q10.linear}, {"c", q10.constant}};
      row["fit_natural"] = {{"a", qe.quadratic}, {"b", qe.linear}, {"c", qe.constant}};
    }
    fits.push_back(row);
  }
  man.write_json("zipf_fits.json", {{"checkpoints", fits}});
}

void write_symmetry(RunManifest& man, const ScanResult& sc,
                    const std::vector<std::uint64_t>& lengths,
                    const std::vector<std::uint32_t>& ks, SymmetryMode mode) {
  auto csv = man.open_csv("symmetry.csv", "n,k,distinct,reversible,ss,exact,includes_empty_word");
  for (auto n : lengths) {
    for (auto k : ks) {
      auto rep = statistical_symmetry(std::span(sc.ids).first(n), sc.table.lo, k, mode);
      csv << n << ',' << k << ',' << rep.distinct << ',' << rep.reversible << ','
          << fmt_double(rep.ss) << ',' << (rep.exact ? 1 : 0) << ','
          << (rep.includes_empty_word ? 1 : 0) << '\n';
    }
  }
}

void write_compression(RunManifest& man, const fs::path& corpus,
                       const std::vector<std::uint64_t>& checkpoints, int level,
                       const std::string& control) {
  auto csv = man.open_csv("compression.csv", "n,S,C,CR,level");
  std::vector<double> ns, crs;
  for (auto n : checkpoints) {
    auto rep = compression_ratio(corpus, n, level);
    csv << n << ',' << rep.raw_bytes << ',' << rep.compressed_bytes << ','
        << fmt_double(rep.ratio) << ',' << level << '\n';
    ns.push_back(static_cast<double>(n));
    crs.push_back(rep.ratio);
  }
  if (control == "random") {
    auto ctl = man.open_csv("compression_control.csv", "n,S,C,CR,level");
    for (auto n : checkpoints) {
      auto rep = random_control_ratio(corpus, n, level);
      ctl << n << ',' << rep.raw_bytes << ',' << rep.compressed_bytes << ','
          << fmt_double(rep.ratio) << ',' << level << '\n';
    }
  }
  if (ns.size() >= 5) {
    auto fit = fit_cr_curve(ns, crs);
    man.write_json("cr_fit.json", {{"model", "a+b/n^c+d/log n"},
                                   {"a", fit.a},
                                   {"b", fit.b},
                                   {"c", fit.c},
                                   {"d", fit.d},
                                   {"r2", fit.r2},
                                   {"converged", fit.converged},
                                   {"degenerate", fit.degenerate}});
  }
}

std::optional<SegmentedFit> write_msd(RunManifest& man, const ScanResult& sc,
                                      const std::string& word, std::uint64_t t_max,
                                      unsigned per_decade, unsigned threads) {
  auto sig = make_signal(sc, word);
  auto lags = log_lag_grid(t_max, per_decade);
  auto curve = msd(sig, lags, threads);
  auto csv = man.open_csv("msd_" + word + ".csv", "t,msd");
  for (std::size_t i = 0; i < curve.lags.size(); ++i)
    csv << curve.lags[i] << ',' << fmt_double(curve.values[i]) << '\n';
  std::optional<SegmentedFit> fit;
  try {
    fit = fit_segmented(curve);
  } catch (const std::invalid_argument&) {
    // Degenerate curve (absent word or too narrow a grid): report without fit.
  }
  json doc{{"word", word},
           {"window_length", sig.window_length},
           {"occurrences", sig.positions.size()},
           {"mean", sig.mean()},
           {"t_max", t_max},
           {"lags_per_decade", per_decade}};
  if (fit) doc["fit"] = fit_to_json(*fit);
  man.write_json("msd_" + word + "_fit.json", doc);
  return fit;
}

// ---------------------------------------------------------------------------

int cmd_report(RunManifest& man, const fs::path& in, unsigned threads);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyck-word text generator and statistics toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string out_path, in_path, out_dir = ".", format = "lines";
  std::string checkpoints_spec, k_spec = "2..8", n_spec, word, words_spec, query, tmax_spec = "auto";
  std::string log_base_spec = "10", control = "random", mode_spec = "auto";
  std::string max_spec;
  unsigned threads = 0, per_decade = 16;
  int level = 6;
  std::uint64_t segment_length = 1u << 20;

  auto* gen = app.add_subcommand("generate", "Generate the text up to --max");
  gen->add_option("--max", max_spec, "Highest position to encode")->required();
  gen->add_option("--out", out_path, "Output corpus file")->required();
  gen->add_option("--format", format, "lines|packed")
      ->check(CLI::IsMember({"lines", "packed"}));
  gen->add_option("--threads", threads, "Worker threads (0 = all cores)");
  gen->add_option("--segment-len", segment_length, "Positions per generation segment");

  auto add_in = [&](CLI::App* cmd) {
    cmd->add_option("--in", in_path, "Corpus file")->required();
    cmd->add_option("--out-dir", out_dir, "Directory for CSV/JSON outputs");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  };

  auto* stats = app.add_subcommand("stats", "Dictionary growth and entropy");
  add_in(stats);
  stats->add_option("--checkpoints", checkpoints_spec, "e.g. 1e1..1e6 or 10,100,1000");

  auto* zipf = app.add_subcommand("zipf", "Rank-frequency spectra and quadratic fits");
  add_in(zipf);
  zipf->add_option("--checkpoints", checkpoints_spec, "Positions to snapshot");
  zipf->add_option("--log-base", log_base_spec, "10 or e");

  auto* sym = app.add_subcommand("symmetry", "Reversible k-tuple fractions");
  add_in(sym);
  sym->add_option("--k", k_spec, "Tuple sizes, e.g. 2..8");
  sym->add_option("--n", n_spec, "Window lengths, e.g. 1e3,1e4,1e5");
  sym->add_option("--mode", mode_spec, "auto|exact|hashed")
      ->check(CLI::IsMember({"auto", "exact", "hashed"}));

  auto* comp = app.add_subcommand("compress", "gzip compression ratio of prefixes");
  add_in(comp);
  comp->add_option("--checkpoints", checkpoints_spec, "Prefix lengths");
  comp->add_option("--level", level, "deflate level")->check(CLI::Range(1, 9));
  comp->add_option("--control", control, "random|none")
      ->check(CLI::IsMember({"random", "none"}));

  auto* msd_cmd = app.add_subcommand("msd", "Mean square displacement of one word's walk");
  add_in(msd_cmd);
  msd_cmd->add_option("--word", word, "Dyck word, e.g. 101010")->required();
  msd_cmd->add_option("--tmax", tmax_spec, "Largest lag (auto = N/10)");
  msd_cmd->add_option("--per-decade", per_decade, "Lags per decade");

  auto* xmsd = app.add_subcommand("xmsd", "Cross correlation of two words' walks");
  add_in(xmsd);
  xmsd->add_option("--words", words_spec, "Two comma-separated words")->required();
  xmsd->add_option("--tmax", tmax_spec, "Largest lag (auto = N/10)");
  xmsd->add_option("--per-decade", per_decade, "Lags per decade");

  auto* phrase = app.add_subcommand("phrase", "Count a contiguous word sequence");
  phrase->add_option("--in", in_path, "Corpus file")->required();
  phrase->add_option("--query", query, "Space-separated words, e.g. \"10 1100\"")->required();

  auto* report = app.add_subcommand("report", "Full desk-scale reproduction");
  add_in(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::vector<std::string> argv_copy(argv, argv + argc);
  try {
    if (gen->parsed()) {
      GenerateOptions opt;
      opt.max_position = parse_count(max_spec);
      opt.format = format == "packed" ? CorpusFormat::packed : CorpusFormat::lines;
      opt.threads = threads;
      opt.segment_length = segment_length;
      RunManifest man("generate", fs::path(out_path).parent_path(), argv_copy);
      auto t0 = std::chrono::steady_clock::now();
      auto rep = generate(out_path, opt);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      man.set_corpus(out_path);
      man.parameters() = {{"max", opt.max_position},
                          {"format", format},
                          {"threads", opt.threads},
                          {"segment_length", opt.segment_length}};
      json cps = json::array();
      for (auto [n, d] : rep.distinct_checkpoints) cps.push_back({{"n", n}, {"d", d}});
      man.write_json("generate_report.json", {{"words_written", rep.words_written},
                                              {"payload_bytes", rep.payload_bytes},
                                              {"seconds", secs},
                                              {"distinct_checkpoints", cps}});
      man.finish();
      std::printf("wrote %" PRIu64 " words (%" PRIu64 " payload bytes) in %.2fs\n",
                  rep.words_written, rep.payload_bytes, secs);
      return 0;
    }

    if (phrase->parsed()) {
      auto reader = CorpusReader::open(in_path);
      auto sc = scan(reader.window(1, reader.max_position()), {.keep_ids = true});
      auto words = split_words(query, ' ');
      auto hits = phrase_count(sc.ids, 1, sc.lexicon, words);
      std::printf("count=%" PRIu64 " first_position=%" PRIu64 "\n", hits.count,
                  hits.first_position);
      return 0;
    }

    auto reader_for = [&](const char* stage) {
      try {
        return CorpusReader::open(in_path);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string(stage) + ": " + e.what());
      }
    };

    if (stats->parsed() || zipf->parsed()) {
      auto reader = reader_for(stats->parsed() ? "stats" : "zipf");
      const auto n = reader.max_position();
      auto cps = checkpoints_spec.empty() ? default_checkpoints(n)
                                          : parse_checkpoints(checkpoints_spec, n);
      RunManifest man(stats->parsed() ? "stats" : "zipf", out_dir, argv_copy);
      man.set_corpus(in_path);
      man.parameters() = {{"checkpoints", cps}};
      auto sc = scan(reader.window(1, n), {.checkpoints = cps});
      if (stats->parsed()) {
        write_stats(man, sc);
      } else {
        double base = log_base_spec == "e" ? std::exp(1.0) : std::stod(log_base_spec);
        man.parameters()["log_base"] = log_base_spec;
        write_zipf(man, sc, base);
      }
      man.finish();
      return 0;
    }

    if (sym->parsed()) {
      auto reader = reader_for("symmetry");
      const auto n = reader.max_position();
      auto lengths = n_spec.empty() ? std::vector<std::uint64_t>{n}
                                    : parse_checkpoints(n_spec, n);
      auto ks = parse_k_list(k_spec);
      const SymmetryMode mode = mode_spec == "exact"   ? SymmetryMode::exact
                                : mode_spec == "hashed" ? SymmetryMode::hashed
                                                        : SymmetryMode::automatic;
      RunManifest man("symmetry", out_dir, argv_copy);
      man.set_corpus(in_path);
      man.parameters() = {{"k", ks}, {"n", lengths}, {"mode", mode_spec}};
      auto sc = scan(reader.window(1, n), {.keep_ids = true});
      write_symmetry(man, sc, lengths, ks, mode);
      man.finish();
      return 0;
    }

    if (comp->parsed()) {
      auto reader = reader_for("compress");
      if (reader.header().format != CorpusFormat::lines)
        throw std::runtime_error("compress: compression ratios are defined on lines corpora");
      const auto n = reader.max_position();
      auto cps = checkpoints_spec.empty() ? default_checkpoints(n)
                                          : parse_checkpoints(checkpoints_spec, n);
      RunManifest man("compress", out_dir, argv_copy);
      man.set_corpus(in_path);
      man.parameters() = {{"checkpoints", cps}, {"level", level}, {"control", control}};
      write_compression(man, in_path, cps, level, control);
      man.finish();
      return 0;
    }

    if (msd_cmd->parsed() || xmsd->parsed()) {
      const char* stage = msd_cmd->parsed() ? "msd" : "xmsd";
      std::vector<std::string> ws = msd_cmd->parsed()
                                        ? std::vector<std::string>{validated_word(word)}
                                        : split_words(words_spec, ',');
      if (xmsd->parsed() && ws.size() != 2)
        throw UsageError("xmsd needs exactly two comma-separated words");
      auto reader = reader_for(stage);
      const auto n = reader.max_position();
      const std::uint64_t t_max =
          tmax_spec == "auto" ? std::max<std::uint64_t>(n / 10, 1) : parse_count(tmax_spec);
      if (t_max >= n) throw UsageError("tmax must stay below the corpus length");
      RunManifest man(stage, out_dir, argv_copy);
      man.set_corpus(in_path);
      man.parameters() = {{"words", ws}, {"tmax", t_max}, {"per_decade", per_decade}};
      auto sc = scan(reader.window(1, n), {.keep_ids = true});
      if (msd_cmd->parsed()) {
        write_msd(man, sc, ws[0], t_max, per_decade, threads);
      } else {
        auto a = make_signal(sc, ws[0]);
        auto b = make_signal(sc, ws[1]);
        auto lags = log_lag_grid(t_max, per_decade);
        auto curve = cross_msd(a, b, lags, threads);
        auto csv = man.open_csv("xmsd_" + ws[0] + "_" + ws[1] + ".csv", "t,msd");
        for (std::size_t i = 0; i < curve.lags.size(); ++i)
          csv << curve.lags[i] << ',' << fmt_double(curve.values[i]) << '\n';
        json doc{{"words", ws}, {"t_max", t_max}};
        try {
          doc["fit"] = fit_to_json(fit_segmented(curve));
        } catch (const std::invalid_argument&) {
        }
        man.write_json("xmsd_" + ws[0] + "_" + ws[1] + "_fit.json", doc);
      }
      man.finish();
      return 0;
    }

    if (report->parsed()) {
      RunManifest man("report", out_dir, argv_copy);
      man.set_corpus(in_path);
      const int rc = cmd_report(man, in_path, threads);
      man.finish();
      return rc;
    }
  } catch (const UsageError& e) {
    std::cerr << "natext: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "natext: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

namespace {

// Full desk-scale reproduction: every block writes its artifacts and appends
// anchor comparisons to the summary.
int cmd_report(RunManifest& man, const fs::path& in, unsigned threads) {
  auto reader = CorpusReader::open(in);
  const auto n = reader.max_position();
  json summary = json::array();
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    summary.push_back({{"check", name}, {"pass", ok}, {"detail", detail}});
    std::printf("%s %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++failures;
  };

  auto cps = default_checkpoints(n);
  auto sc = scan(reader.window(1, n), {.checkpoints = cps, .keep_ids = true});
  auto art = write_stats(man, sc);

  // Dictionary rows.
  for (const auto& row : reference::kDictionarySizes) {
    if (row.n > n) break;
    auto it = std::find(art.checkpoints.begin(), art.checkpoints.end(), row.n);
    const auto d = art.distinct[static_cast<std::size_t>(it - art.checkpoints.begin())];
    check("dictionary size at " + std::to_string(row.n), d == row.distinct,
          "expected " + std::to_string(row.distinct) + ", got " + std::to_string(d));
  }

  // Top-5 rows.
  for (const auto& row : reference::kTopWords) {
    if (row.n > n) break;
    auto it = std::find(art.checkpoints.begin(), art.checkpoints.end(), row.n);
    auto table = sc.table_at(static_cast<std::size_t>(it - art.checkpoints.begin()));
    auto spec = rank_spectrum(table, sc.lexicon);
    bool ok = true;
    std::string got;
    for (std::size_t r = 0; r < 5 && !row.words[r].empty(); ++r) {
      const std::string w = r < spec.ranks() ? sc.lexicon.word(spec.entries[r].id) : "?";
      if (!got.empty()) got += ' ';
      got += w;
      ok = ok && w == row.words[r];
    }
    check("top words at " + std::to_string(row.n), ok, got);
  }

  // Worked micro-values.
  if (n >= 10) {
    auto it = std::find(art.checkpoints.begin(), art.checkpoints.end(), 10ull);
    auto t10 = sc.table_at(static_cast<std::size_t>(it - art.checkpoints.begin()));
    check("p(10) over the first ten", t10.frequency("10", sc.lexicon) == 0.4,
          fmt_double(t10.frequency("10", sc.lexicon)));
    check("p(1010) over the first ten", t10.frequency("1010", sc.lexicon) == 0.2,
          fmt_double(t10.frequency("1010", sc.lexicon)));
    auto ss = statistical_symmetry(std::span(sc.ids).subspan(1, 9), 2, 4);
    check("reversible 4-tuples in 2..10", ss.reversible == 2 && ss.distinct == 6,
          std::to_string(ss.reversible) + "/" + std::to_string(ss.distinct));
  }
  if (n >= 100) {
    auto it = std::find(art.checkpoints.begin(), art.checkpoints.end(), 100ull);
    const double h = art.entropies[static_cast<std::size_t>(it - art.checkpoints.begin())];
    check("entropy at one hundred", std::abs(h - 2.77) <= 0.01, fmt_double(h));
  }
  {
    bool ok = true;
    for (std::size_t i = 0; i < art.checkpoints.size(); ++i)
      if (art.distinct[i] > 0 && art.entropies[i] > entropy_bound(art.distinct[i]) + 1e-12)
        ok = false;
    check("entropy below dictionary bound", ok, "all checkpoints");
  }

  // Heaps exponents.
  {
    std::vector<double> tn, td;
    for (const auto& row : reference::kDictionarySizes) {
      tn.push_back(static_cast<double>(row.n));
      td.push_back(static_cast<double>(row.distinct));
    }
    auto table_fit = fit_power_law(tn, td, PowerLawWeighting::linear_scale);
    check("reference-table growth exponent", std::abs(table_fit.exponent - 0.234) <= 0.02,
          fmt_double(table_fit.exponent));
    check("corpus growth exponent",
          art.heaps_linear.exponent >= 0.19 && art.heaps_linear.exponent <= 0.29,
          fmt_double(art.heaps_linear.exponent));
  }

  // Zipf checkpoints (decades from 1e4).
  write_zipf(man, sc, 10.0);
  {
    std::vector<double> a10;
    bool f_ok = true;
    std::string detail;
    for (std::size_t i = 0; i < sc.checkpoints.size(); ++i) {
      const auto& cp = sc.checkpoints[i];
      if (cp.position < 10000) continue;
      std::uint64_t p = cp.position;
      while (p % 10 == 0) p /= 10;
      if (p != 1) continue;  // decades only
      auto table = sc.table_at(i);
      auto spec = rank_spectrum(table, sc.lexicon);
      const double f1 = spec.entries[0].frequency;
      const double f2 = spec.entries[1].frequency;
      if (std::abs(f1 - 0.20) > 0.02 || std::abs(f2 - 0.15) > 0.02) f_ok = false;
      detail += std::to_string(cp.position) + ":f1=" + fmt_double(f1).substr(0, 6) +
                ",f2=" + fmt_double(f2).substr(0, 6) + " ";
      a10.push_back(fit_zipf_quadratic(spec, 10.0).quadratic);
    }
    check("rank-1/rank-2 frequency windows", f_ok, detail);
    if (a10.size() >= 2) {
      const auto [lo, hi] = std::minmax_element(a10.begin(), a10.end());
      check("quadratic coefficient stability", *hi - *lo < 0.15,
            "spread " + fmt_double(*hi - *lo));
    }
  }

  // Symmetry at decade lengths.
  {
    std::vector<std::uint64_t> lengths;
    for (std::uint64_t v = 1000; v <= n; v *= 10) lengths.push_back(v);
    std::vector<std::uint32_t> ks{2, 3, 4, 5, 6, 7, 8};
    write_symmetry(man, sc, lengths, ks, SymmetryMode::automatic);
    bool decreasing = true;
    double prev = 2.0, last = 1.0;
    for (auto k : ks) {
      auto rep = statistical_symmetry(std::span(sc.ids).first(n), 1, k);
      if (rep.ss >= prev) decreasing = false;
      prev = rep.ss;
      last = rep.ss;
    }
    check("tuple symmetry decreasing in k", decreasing, "k=2..8 at full length");
    check("8-tuple symmetry bound", last < 0.821, fmt_double(last));
  }

  // Phrases.
  {
    struct Probe {
      std::vector<std::string> phrase;
      std::uint64_t count;
      std::uint64_t first;
      bool at_least;
    };
    const Probe probes[] = {{{"1100", "1100"}, 1, 8, false},
                            {{"10", "10"}, 1, 2, false},
                            {{"10", "111000"}, 0, 0, false},
                            {{"111000", "10"}, 2, 16, true}};
    for (const auto& p : probes) {
      auto hits = phrase_count(sc.ids, 1, sc.lexicon, p.phrase);
      const bool ok = p.at_least ? (hits.count >= p.count && hits.first_position == p.first)
                                 : (hits.count == p.count && hits.first_position == p.first);
      check("phrase " + p.phrase[0] + " " + p.phrase[1], ok,
            "count=" + std::to_string(hits.count) +
                " first=" + std::to_string(hits.first_position));
    }
  }

  // Compression at decade lengths.
  if (reader.header().format == CorpusFormat::lines && n >= 100000) {
    std::vector<std::uint64_t> cps_c;
    for (std::uint64_t v = 1000; v <= n; v *= 10) cps_c.push_back(v);
    write_compression(man, in, cps_c, 6, "random");
    bool below = true;
    std::vector<double> ratios;
    for (auto c : cps_c) {
      auto corpus = compression_ratio(in, c, 6);
      auto control = random_control_ratio(in, c, 6);
      ratios.push_back(corpus.ratio);
      if (corpus.ratio >= control.ratio) below = false;
    }
    check("compression below random control", below, "all decade checkpoints");
    double interior = *std::min_element(ratios.begin() + 1, ratios.end() - 1);
    check("interior compression minimum",
          interior < ratios.front() && interior < ratios.back(),
          "interior " + fmt_double(interior) + " ends " + fmt_double(ratios.front()) + "/" +
              fmt_double(ratios.back()));
  }

  // Walks for the ten reference words.
  {
    std::vector<double> sf_gamma2;
    std::optional<SegmentedFit> fit_1100;
    for (const auto& family : {reference::kSquareFreeWords, reference::kNonSquareFreeWords}) {
      for (auto wv : family) {
        const std::string w(wv);
        auto fit = write_msd(man, sc, w, std::max<std::uint64_t>(n / 10, 8), 16, threads);
        if (!fit) continue;
        if ((w == "10" || w == "1010" || w == "101010") && fit->crossover_detected)
          sf_gamma2.push_back(fit->gamma2);
        if (w == "1100") fit_1100 = fit;
        if (w == "10" || w == "1010" || w == "101010") {
          const bool ok = fit->crossover_detected && fit->gamma2 > fit->gamma1 &&
                          fit->gamma1 >= 0.7 && fit->gamma1 <= 1.3 && fit->gamma2 >= 1.3 &&
                          fit->gamma2 <= 2.05;
          check("walk crossover for " + w, ok,
                "gamma1=" + fmt_double(fit->gamma1) + " gamma2=" + fmt_double(fit->gamma2) +
                    " tc=" + fmt_double(fit->crossover));
        }
      }
    }
    if (fit_1100 && sf_gamma2.size() == 3) {
      double mean = (sf_gamma2[0] + sf_gamma2[1] + sf_gamma2[2]) / 3.0;
      check("walk exponent of 1100 below the bush family",
            fit_1100->gamma2 > 1.0 && fit_1100->gamma2 < mean,
            "gamma2=" + fmt_double(fit_1100->gamma2) + " family mean " + fmt_double(mean));
    }
  }

  man.write_json("report.json", {{"n", n}, {"failures", failures}, {"checks", summary}});
  std::printf("report: %d failing checks, artifacts in %s\n", failures,
              man.dir().string().c_str());
  return failures == 0 ? 0 : 1;
}

}  // namespace
