#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "lexsig/commands.hpp"
#include "lexsig/error.hpp"

using namespace lexsig;
using testutil::TempDir;

static void write_corpus_dir(const std::filesystem::path& dir, size_t docs) {
  std::filesystem::create_directories(dir);
  auto raw = testutil::graded_corpus(docs, 80, 17);
  for (const auto& d : raw) testutil::write_file(dir / (d.id + ".txt"), d.text);
}

static IndexArgs indexed_fixture(const TempDir& tmp, size_t docs = 30) {
  write_corpus_dir(tmp.path / "corpus", docs);
  IndexArgs args;
  args.corpus_dir = tmp.path / "corpus";
  args.out = tmp.path / "fixture.idx";
  return args;
}

TEST_CASE("index command builds a loadable index") {
  TempDir tmp;
  auto args = indexed_fixture(tmp);
  CHECK(cmd_index(args) == 0);
  auto index = CorpusIndex::load(args.out);
  CHECK(index.doc_count() == 30);
  CHECK(index.contains("north"));

  // rerun writes identical bytes
  auto first = testutil::read_file(args.out);
  CHECK(cmd_index(args) == 0);
  CHECK(testutil::read_file(args.out) == first);

  IndexArgs neither;
  neither.out = tmp.path / "x.idx";
  CHECK_THROWS_AS(cmd_index(neither), UsageError);

  IndexArgs both = args;
  both.lines_file = tmp.path / "lines.txt";
  CHECK_THROWS_AS(cmd_index(both), UsageError);

  IndexArgs missing;
  missing.corpus_dir = tmp.path / "no_such_dir";
  missing.out = tmp.path / "x.idx";
  CHECK_THROWS_AS(cmd_index(missing), DataError);
}

TEST_CASE("index command line mode") {
  TempDir tmp;
  testutil::write_file(tmp.path / "docs.txt", "alpha beta gamma\nalpha beta\n");
  IndexArgs args;
  args.lines_file = tmp.path / "docs.txt";
  args.out = tmp.path / "lines.idx";
  CHECK(cmd_index(args) == 0);
  auto index = CorpusIndex::load(args.out);
  CHECK(index.doc_count() == 2);
  CHECK(index.unigram_frequency("alpha") == 2);
}

TEST_CASE("tables command publishes loadable tables") {
  TempDir tmp;
  TablesArgs args;
  args.x_values = {3, 5};
  args.f_max = 2;
  args.ell_max = 20;
  args.out_dir = tmp.path / "tables";
  CHECK(cmd_tables(args) == 0);
  auto t3 = PiTable::load(args.out_dir / table_file_name(3));
  CHECK(t3.x_threshold() == 3);
  CHECK(t3.f_max() == 2);
  auto t5 = PiTable::load(args.out_dir / table_file_name(5));
  HistEngine eng(5);
  CHECK(t5.pi(1, 2, 20) == eng.pi(1, 2, 20));

  // single-x override with TSV export
  TablesArgs single;
  single.x_values = {4};
  single.f_max = 1;
  single.ell_max = 10;
  single.out_file = tmp.path / "one.pit";
  single.tsv = tmp.path / "one.tsv";
  CHECK(cmd_tables(single) == 0);
  auto tsv = testutil::read_file(single.tsv);
  CHECK(tsv.find("f_hat\tf\tell\tpi\n") == 0);

  TablesArgs conflict;
  conflict.x_values = {3, 5};
  conflict.out_file = tmp.path / "conflict.pit";
  CHECK_THROWS_AS(cmd_tables(conflict), UsageError);

  TablesArgs none;
  none.x_values = {};
  CHECK_THROWS_AS(cmd_tables(none), UsageError);
}

TEST_CASE("pi cache serves engines or strict tables") {
  TempDir tmp;
  PiCache live(std::nullopt, HistMode::exact, HistLimits{});
  const auto& eng = live.for_span(5);
  CHECK(eng.x_threshold() == 5);
  // repeated requests reuse one source
  CHECK(&live.for_span(5) == &eng);

  TablesArgs pub;
  pub.x_values = {5};
  pub.f_max = 2;
  pub.ell_max = 30;
  pub.out_dir = tmp.path / "tables";
  REQUIRE(cmd_tables(pub) == 0);

  PiCache dir_cache(tmp.path / "tables", HistMode::exact, HistLimits{});
  const auto& table = dir_cache.for_span(5);
  CHECK(table.x_threshold() == 5);
  CHECK_THROWS_AS(table.pi(1, 3, 20), TableMissError);
  // a configured directory never falls back to live computation
  try {
    dir_cache.for_span(7);
    FAIL("expected an error for the absent table");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("tables") != std::string::npos);
  }

  PiCache file_cache(tmp.path / "tables" / table_file_name(5), HistMode::exact, HistLimits{});
  CHECK(file_cache.for_span(5).pi(1, 1, 10) == HistEngine(5).pi(1, 1, 10));
  CHECK_THROWS_AS(file_cache.for_span(9), DataError);  // file pinned to x = 5
}

TEST_CASE("measure name parsing") {
  auto all = parse_measures({"all"});
  CHECK(all.size() == 10);
  auto some = parse_measures({"pmi", "dice"});
  REQUIRE(some.size() == 2);
  CHECK(some[0] == MeasureId::pmi);
  CHECK(some[1] == MeasureId::dice);
  CHECK_THROWS_AS(parse_measures({"bogus"}), UsageError);
  try {
    parse_measures({"bogus"});
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("pmi") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_measures({}), UsageError);
}

TEST_CASE("score command on a single pair") {
  TempDir tmp;
  auto idx = indexed_fixture(tmp);
  REQUIRE(cmd_index(idx) == 0);

  ScoreArgs args;
  args.index_file = idx.out;
  args.span = 5;
  args.pair = {{"north", "south"}};
  args.out = tmp.path / "score.tsv";
  CHECK(cmd_score(args) == 0);
  auto out = testutil::read_file(args.out);
  CHECK(out.find("word1\tword2\tflag\tK\tZ\t") == 0);
  CHECK(out.find("north\tsouth\tok\t") != std::string::npos);

  // a word missing from the corpus flags the row instead of failing
  ScoreArgs missing = args;
  missing.pair = {{"north", "zzzz"}};
  missing.out = tmp.path / "missing.tsv";
  CHECK(cmd_score(missing) == 0);
  CHECK(testutil::read_file(missing.out).find("missing_word") != std::string::npos);

  ScoreArgs neither = args;
  neither.pair.reset();
  CHECK_THROWS_AS(cmd_score(neither), UsageError);

  ScoreArgs both = args;
  both.dataset = tmp.path / "ds.txt";
  CHECK_THROWS_AS(cmd_score(both), UsageError);

  ScoreArgs badfmt = args;
  badfmt.format = "xml";
  CHECK_THROWS_AS(cmd_score(badfmt), UsageError);

  ScoreArgs nospan = args;
  nospan.span = 0;
  CHECK_THROWS_AS(cmd_score(nospan), UsageError);
}

TEST_CASE("score command over a dataset with classification") {
  TempDir tmp;
  auto idx = indexed_fixture(tmp);
  REQUIRE(cmd_index(idx) == 0);
  testutil::write_file(tmp.path / "ds.txt", testutil::graded_dataset_text());

  ScoreArgs args;
  args.index_file = idx.out;
  args.span = 5;
  args.dataset = tmp.path / "ds.txt";
  args.classify_types = true;
  args.out = tmp.path / "classify.tsv";
  args.stats_tsv = tmp.path / "stats.tsv";
  CHECK(cmd_score(args) == 0);
  auto out = testutil::read_file(args.out);
  CHECK(out.find("exclusive") != std::string::npos);
  CHECK(out.find("csr_A") != std::string::npos);
  CHECK(out.find("north\tsouth\t") != std::string::npos);
  CHECK(out.find("missing\tword\t") != std::string::npos);

  auto stats = testutil::read_file(args.stats_tsv);
  CHECK(stats.find("word1\tword2\tdoc\tell\tf\tf_hat\n") == 0);
  CHECK(stats.find("north\tsouth\t") != std::string::npos);

  // jsonl carries the same rows as objects
  ScoreArgs js = args;
  js.format = "jsonl";
  js.out = tmp.path / "classify.jsonl";
  js.stats_tsv.clear();
  CHECK(cmd_score(js) == 0);
  auto jout = testutil::read_file(js.out);
  CHECK(jout.find("\"word1\":\"north\"") != std::string::npos);
  CHECK(jout.find("\"exclusive\":") != std::string::npos);
}

TEST_CASE("score fails fast when a configured table cannot cover the corpus") {
  TempDir tmp;
  auto idx = indexed_fixture(tmp);
  REQUIRE(cmd_index(idx) == 0);

  TablesArgs pub;
  pub.x_values = {5};
  pub.f_max = 2;
  pub.ell_max = 10;  // documents are longer than this
  pub.out_dir = tmp.path / "tables";
  REQUIRE(cmd_tables(pub) == 0);

  ScoreArgs args;
  args.index_file = idx.out;
  args.span = 5;
  args.table = tmp.path / "tables";
  args.pair = {{"north", "south"}};
  args.out = tmp.path / "never.tsv";
  CHECK_THROWS_AS(cmd_score(args), DataError);
}

TEST_CASE("evaluate command writes the full report set deterministically") {
  TempDir tmp;
  auto idx = indexed_fixture(tmp);
  REQUIRE(cmd_index(idx) == 0);
  testutil::write_file(tmp.path / "ds.txt", testutil::graded_dataset_text());

  EvaluateArgs args;
  args.index_file = idx.out;
  args.dataset = tmp.path / "ds.txt";
  args.out_dir = tmp.path / "run1";
  args.settings.spans = {5, 25};
  args.settings.epsilon_grid = {0.1, 0.4};
  args.settings.delta_grid = {0.1, 0.4};
  args.settings.top_k = 4;
  args.settings.jobs = 1;
  CHECK(cmd_evaluate(args) == 0);

  const char* files[] = {"evaluation.md",   "effectiveness.tsv", "effectiveness.jsonl",
                         "best_params.tsv", "best_params.jsonl", "human.tsv",
                         "human.jsonl",     "top_k.tsv",         "top_k.jsonl",
                         "rankings.tsv",    "excluded.tsv"};
  for (const char* f : files) {
    INFO(f);
    CHECK(std::filesystem::exists(args.out_dir / f));
  }

  EvaluateArgs again = args;
  again.out_dir = tmp.path / "run2";
  again.settings.jobs = 3;
  CHECK(cmd_evaluate(again) == 0);
  for (const char* f : files) {
    INFO(f);
    CHECK(testutil::read_file(args.out_dir / f) == testutil::read_file(again.out_dir / f));
  }

  auto md = testutil::read_file(args.out_dir / "evaluation.md");
  CHECK(md.find("north") != std::string::npos);
  CHECK(md.find("| csa") != std::string::npos);
}
