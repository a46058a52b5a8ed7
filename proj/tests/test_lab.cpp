#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lamina/config.hpp"
#include "lamina/error.hpp"
#include "lamina/lab.hpp"
#include "lamina/subgroup.hpp"

using namespace lamina;

namespace {

std::string cfg_path(const char* name) { return std::string(LAMINA_DATA_DIR "/configs/") + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("lamina-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::vector<std::size_t> column(const Table& t, std::size_t c) {
  std::vector<std::size_t> out;
  for (const auto& row : t.rows) {
    out.push_back(std::stoul(row[c]));
  }
  return out;
}

const char* kRauzy = "a -> ab\nb -> ac\nc -> a\ninverse:\na -> c\nb -> C a\nc -> C b\n";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = load_config(cfg_path("filling.cfg"));
  CHECK(cfg.experiments == std::vector<std::string>{"filling"});
  CHECK(cfg.rank() == 3);
  CHECK(cfg.subgroups.size() == 3);
  CHECK(cfg.subgroups[1].name == "even_a");
  CHECK(cfg.n_max == 14);
  const ExperimentConfig qc = load_config(cfg_path("qc.cfg"));
  CHECK(qc.hyperbolic == Hyperbolicity::declared);
  CHECK(qc.r_max == 8);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[experiment]\nrun = filling\n[bogus]\n"), MalformedInput);
  CHECK_THROWS_AS(parse_config("stray line\n"), MalformedInput);
  CHECK_THROWS_AS(parse_config("[caps]\nr_max = 99\n[automorphism]\n" + std::string(kRauzy)),
                  MalformedInput);
  CHECK_THROWS_AS(parse_config("[automorphism]\n" + std::string(kRauzy) + "[subgroup x]\ngens = d\n"),
                  MalformedInput);
  CHECK_THROWS_AS(parse_config("[caps]\nn_max = ten\n"), MalformedInput);
  CHECK_THROWS_AS(parse_config("[subgroup]\ngens = a\n"), MalformedInput);
  CHECK_THROWS_AS(load_config("/nonexistent/lamina.cfg"), Error);
}

TEST_CASE("LAMINA_MAX_STATES overrides the config cap") {
  ::setenv("LAMINA_MAX_STATES", "777", 1);
  const ExperimentConfig cfg = parse_config("[automorphism]\n" + std::string(kRauzy) +
                                            "[caps]\nmax_states = 5000\n");
  ::unsetenv("LAMINA_MAX_STATES");
  CHECK(cfg.max_states == 777);
}

TEST_CASE("filling on the rauzy substitution") {
  const Report r = run_filling(load_config(cfg_path("filling.cfg")));
  CHECK(r.verdict == Verdict::consistent);
  const Table* ab = r.table("ab.leaf.a");
  REQUIRE(ab);
  CHECK(ab->columns == std::vector<std::string>{"n", "segment_length", "carried_length"});
  const auto seg = column(*ab, 1);
  const auto carried = column(*ab, 2);
  REQUIRE(carried.size() == 15);
  // longest c-free factors of rho^n(a): abaaba appears from n = 4 on
  const std::vector<std::size_t> expected{1, 2, 3, 3, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6};
  CHECK(carried == expected);
  CHECK(seg[14] == 5768);
  for (const char* name : {"even_a.leaf.a", "even_a.leaf.b", "even_a.eigenray.a^-1", "whole.leaf.c"}) {
    const Table* t = r.table(name);
    REQUIRE(t);
    CHECK(column(*t, 1) == column(*t, 2));
  }
  for (const Table& t : r.tables) {
    if (t.name.starts_with("ab.")) {
      CHECK(column(t, 2).back() == 6);
    }
  }
}

TEST_CASE("filling rejects non-primitive maps") {
  ExperimentConfig cfg = parse_config(
      "[automorphism]\na -> ab\nb -> b\ninverse:\na -> aB\nb -> b\n[subgroup x]\ngens = a\n");
  CHECK_THROWS_AS(run_filling(cfg), HypothesisViolation);
  cfg = load_config(cfg_path("filling.cfg"));
  cfg.inverse_map = MarkedGraphMap::parse("a -> a\nb -> ba\nc -> c\n");
  CHECK_THROWS_AS(run_filling(cfg), HypothesisViolation);
}

TEST_CASE("filling flags a carried segment of an infinite-index subgroup") {
  // with n_max = 1 the whole curve is rho(a) = ab, which <a,b> carries
  ExperimentConfig cfg = parse_config("[automorphism]\n" + std::string(kRauzy) +
                                      "[subgroup ab]\ngens = a, b\n[caps]\nn_max = 1\n"
                                      "plateau_window = 2\nseeds = a\n");
  const Report r = run_filling(cfg);
  CHECK(r.verdict == Verdict::inconsistent);
  REQUIRE(r.counter_sample);
  CHECK(r.counter_sample->kind == "carried_segment");
  CHECK(r.counter_sample->word.to_string() == "ab");
  CHECK(replay(*r.counter_sample, cfg));
  CounterSample forged = *r.counter_sample;
  forged.word = Word::parse("abc");
  CHECK_FALSE(replay(forged, cfg));
}

TEST_CASE("factor pipeline hits") {
  const ExperimentConfig cfg = load_config(cfg_path("factor.cfg"));
  const Report r = run_factor(cfg);
  const Table* hits = r.table("hits");
  REQUIRE(hits);
  const std::vector<std::vector<std::string>> expected{{"K1", "K1", "1", "1"},
                                                       {"index2", "K1", "1", "2"}};
  CHECK(hits->rows == expected);
  const Table* verdicts = r.table("verdicts");
  REQUIRE(verdicts);
  CHECK(verdicts->rows[2] == std::vector<std::string>{"ac", "inconclusive-by-bound"});
  CHECK(r.verdict == Verdict::inconclusive);
}

TEST_CASE("factor precheck") {
  ExperimentConfig cfg = load_config(cfg_path("factor.cfg"));
  cfg.factors[0].generators = parse_word_list("a, c", 4);
  CHECK_THROWS_AS(run_factor(cfg), HypothesisViolation);
  cfg = load_config(cfg_path("factor.cfg"));
  cfg.automorphism = Automorphism::parse(
      "a -> b\nb -> a\nc -> cd\nd -> c\ninverse:\na -> b\nb -> a\nc -> d\nd -> D c\n");
  CHECK_THROWS_AS(run_factor(cfg), HypothesisViolation);
}

TEST_CASE("quasiconvexity for the identity automorphism") {
  const Report r = run_quasiconvexity(load_config(cfg_path("qc_identity.cfg")));
  CHECK(r.verdict == Verdict::inconclusive);
  const Table* fits = r.table("fits");
  REQUIRE(fits);
  CHECK(fits->rows[0][0] == "H");
  CHECK(fits->rows[0][5] == "yes");
  CHECK(fits->rows[0][2] == "1.000000");
  const Table* witness = r.table("witness");
  REQUIRE(witness);
  for (const auto& row : witness->rows) {
    CHECK(row[1] == "1");
  }
}

TEST_CASE("quasiconvexity with a partial ball is inconclusive") {
  ExperimentConfig cfg = load_config(cfg_path("qc.cfg"));
  cfg.max_states = 3000;
  const Report r = run_quasiconvexity(cfg);
  CHECK(r.resource_limited);
  CHECK(r.verdict == Verdict::inconclusive);
}

TEST_CASE("distorted subgroup counter-sample replays") {
  // t^3 a t^-3 = abaab: length 5 in H, at most 7 in G
  ExperimentConfig cfg = parse_config("[automorphism]\na -> ab\nb -> a\ninverse:\na -> b\nb -> B a\n");
  const CounterSample s{"distorted_subgroup", "H", parse_word_list("a, b", 2),
                        Word::parse("abaab"), 7, 5};
  CHECK(replay(s, cfg));
  CounterSample wrong = s;
  wrong.value = 4;
  CHECK_FALSE(replay(wrong, cfg));
  wrong = s;
  wrong.radius = 2;
  CHECK_FALSE(replay(wrong, cfg));
}

TEST_CASE("emit: json schema, csv columns, determinism") {
  const ExperimentConfig cfg = load_config(cfg_path("filling.cfg"));
  const std::vector<Report> reports{run_filling(cfg)};
  const auto dir = scratch("emit");
  const auto json_files = emit(reports, Format::json, dir.string());
  REQUIRE(json_files.size() == 1);
  const auto j = nlohmann::json::parse(slurp(json_files[0]));
  CHECK(j["schema_version"] == 1);
  CHECK(j["verdict"] == "consistent");
  const auto csv1 = emit(reports, Format::csv, (dir / "a").string());
  const auto csv2 = emit(std::vector<Report>{run_filling(cfg)}, Format::csv, (dir / "b").string());
  REQUIRE(csv1.size() == csv2.size());
  for (std::size_t i = 0; i < csv1.size(); ++i) {
    CHECK(slurp(csv1[i]) == slurp(csv2[i]));
  }
  CHECK(slurp(dir / "a" / "filling.ab.leaf.a.csv").starts_with("n,segment_length,carried_length\n"));
  const auto text = emit(reports, Format::text, dir.string());
  CHECK(slurp(text[0]).starts_with("experiment: filling\nverdict: consistent\n"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit errors") {
  CHECK_THROWS_WITH_AS(emit({}, Format::json, "/tmp"), doctest::Contains("nothing to run"), Error);
  ExperimentConfig cfg;
  CHECK_THROWS_WITH_AS(run_experiments(cfg), doctest::Contains("nothing to run"), Error);
  Report bad;
  bad.kind = "x";
  bad.verdict = Verdict::inconsistent;
  CHECK_THROWS_AS(emit(std::vector<Report>{bad}, Format::json, "/tmp"), Error);
  Report ok;
  ok.kind = "x";
  const auto file = scratch("blocker");
  std::ofstream(file) << "not a directory";
  const std::string path = file.string();
  CHECK_THROWS_WITH_AS(emit(std::vector<Report>{ok}, Format::json, (file / "sub").string()),
                       doctest::Contains(path.c_str()), Error);
  std::filesystem::remove(file);
  CHECK_THROWS_AS(parse_format("xml"), MalformedInput);
}

TEST_CASE("run_experiments follows the configured order") {
  const auto reports = run_experiments(load_config(cfg_path("all.cfg")));
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].kind == "filling");
  CHECK(reports[1].kind == "qc");
  CHECK(reports[1].verdict == Verdict::consistent);
}
