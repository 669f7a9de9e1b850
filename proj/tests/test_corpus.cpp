#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "lexsig/corpus.hpp"
#include "lexsig/error.hpp"

using namespace lexsig;
using testutil::TempDir;

TEST_CASE("tokenize strips edge punctuation and folds case") {
  auto toks = tokenize("The quick, brown fox -- jumped!", true);
  std::vector<std::string> want = {"the", "quick", "brown", "fox", "jumped"};
  CHECK(toks == want);

  CHECK(tokenize("Hello, world!", true) == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("  ", true).empty());
  CHECK(tokenize("!!! ... ---", true).empty());
  // interior punctuation survives
  CHECK(tokenize("don't stop", true) == std::vector<std::string>{"don't", "stop"});
  CHECK(tokenize("--x--", true) == std::vector<std::string>{"x"});
  // case preserved when folding is off
  CHECK(tokenize("Mixed CASE", false) == std::vector<std::string>{"Mixed", "CASE"});
}

TEST_CASE("ingest records 1-based positions per document") {
  std::vector<RawDocument> docs = {{"d1", "a b a"}, {"d2", "b b"}};
  auto index = ingest(docs, IngestConfig{});
  CHECK(index.total_tokens() == 5);
  CHECK(index.docs().size() == 2);
  CHECK(index.unigram_frequency("a") == 2);
  CHECK(index.unigram_frequency("b") == 3);
  CHECK(index.unigram_frequency("zzz") == 0);

  const auto* pa = index.postings("a");
  REQUIRE(pa != nullptr);
  REQUIRE(pa->size() == 1);
  CHECK((*pa)[0].doc == 0);
  CHECK((*pa)[0].positions == std::vector<uint32_t>{1, 3});

  const auto* pb = index.postings("b");
  REQUIRE(pb != nullptr);
  REQUIRE(pb->size() == 2);
  CHECK((*pb)[0].positions == std::vector<uint32_t>{2});
  CHECK((*pb)[1].positions == std::vector<uint32_t>{1, 2});
}

TEST_CASE("ingest drops empty documents and rejects an empty corpus") {
  std::vector<RawDocument> docs = {{"d1", "  ,,, "}, {"d2", "word"}};
  auto index = ingest(docs, IngestConfig{});
  CHECK(index.docs().size() == 1);
  CHECK(index.docs()[0].id == "d2");

  std::vector<RawDocument> empty = {{"d1", " . "}};
  CHECK_THROWS_AS(ingest(empty, IngestConfig{}), DataError);
  CHECK_THROWS_AS(ingest({}, IngestConfig{}), DataError);
}

TEST_CASE("long documents are chunked and token counts survive") {
  std::string text;
  for (int i = 0; i < 3200; ++i) {
    if (i) text += ' ';
    text += "t" + std::to_string(i % 7);
  }
  std::vector<RawDocument> docs = {{"big", text}};

  IngestConfig cfg;
  cfg.max_doc_length = 1500;
  auto chunked = ingest(docs, cfg);
  REQUIRE(chunked.docs().size() == 3);
  CHECK(chunked.docs()[0].id == "big#1");
  CHECK(chunked.docs()[0].length == 1500);
  CHECK(chunked.docs()[1].id == "big#2");
  CHECK(chunked.docs()[1].length == 1500);
  CHECK(chunked.docs()[2].id == "big#3");
  CHECK(chunked.docs()[2].length == 200);
  CHECK(chunked.total_tokens() == 3200);

  IngestConfig wide;
  wide.max_doc_length = 100000;
  auto whole = ingest(docs, wide);
  REQUIRE(whole.docs().size() == 1);
  CHECK(whole.docs()[0].id == "big");
  // unigram totals unaffected by chunking
  for (int i = 0; i < 7; ++i) {
    std::string w = "t" + std::to_string(i);
    CHECK(chunked.unigram_frequency(w) == whole.unigram_frequency(w));
  }

  IngestConfig bad;
  bad.max_doc_length = 0;
  CHECK_THROWS_AS(ingest(docs, bad), UsageError);
}

TEST_CASE("docs_with_both merges posting lists") {
  std::vector<RawDocument> docs = {
      {"d0", "x pad y"}, {"d1", "x pad pad"}, {"d2", "pad y pad"}, {"d3", "y x"}};
  auto index = ingest(docs, IngestConfig{});
  auto both = index.docs_with_both("x", "y");
  CHECK(both == std::vector<uint32_t>{0, 3});
  CHECK(index.docs_with_both("x", "zzz").empty());
  CHECK_THROWS_AS(index.docs_with_both("x", "x"), DataError);
}

TEST_CASE("directory reader ingests files in sorted name order") {
  TempDir tmp;
  testutil::write_file(tmp.path / "b.txt", "bravo words");
  testutil::write_file(tmp.path / "a.txt", "alpha words");
  auto docs = read_corpus_dir(tmp.path.string());
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "a.txt");
  CHECK(docs[1].id == "b.txt");
}

TEST_CASE("line reader labels documents by file and line") {
  TempDir tmp;
  auto file = tmp.path / "lines.txt";
  testutil::write_file(file, "first doc here\nsecond doc\n");
  auto docs = read_line_corpus(file.string());
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "lines.txt:1");
  CHECK(docs[1].id == "lines.txt:2");
  CHECK(docs[1].text == "second doc");
}

static CorpusIndex random_index(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> vocab = {"aa", "bb", "cc", "dd", "ee"};
  std::vector<RawDocument> docs;
  for (int d = 0; d < 6; ++d) {
    std::string text;
    int n = 5 + static_cast<int>(rng() % 25);
    for (int i = 0; i < n; ++i) {
      if (i) text += ' ';
      text += vocab[rng() % vocab.size()];
    }
    docs.push_back({"doc" + std::to_string(d), text});
  }
  return ingest(docs, IngestConfig{});
}

TEST_CASE("index round-trips through its file format") {
  TempDir tmp;
  auto index = random_index(42);
  auto file = (tmp.path / "x.idx").string();
  index.save(file);
  auto back = CorpusIndex::load(file);

  CHECK(back.total_tokens() == index.total_tokens());
  REQUIRE(back.docs().size() == index.docs().size());
  for (size_t i = 0; i < index.docs().size(); ++i) {
    CHECK(back.docs()[i].id == index.docs()[i].id);
    CHECK(back.docs()[i].length == index.docs()[i].length);
  }
  CHECK(back.sorted_vocabulary() == index.sorted_vocabulary());
  for (const auto& w : index.sorted_vocabulary()) {
    const auto* p1 = index.postings(w);
    const auto* p2 = back.postings(w);
    REQUIRE(p2 != nullptr);
    REQUIRE(p1->size() == p2->size());
    for (size_t i = 0; i < p1->size(); ++i) {
      CHECK((*p1)[i].doc == (*p2)[i].doc);
      CHECK((*p1)[i].positions == (*p2)[i].positions);
    }
  }

  // re-saving the loaded index reproduces the file byte for byte
  auto file2 = (tmp.path / "y.idx").string();
  back.save(file2);
  CHECK(testutil::read_file(file) == testutil::read_file(file2));
}

TEST_CASE("ingest output does not depend on the worker count") {
  TempDir tmp;
  auto docs = testutil::graded_corpus(10, 40, 7);
  auto a = ingest(docs, IngestConfig{}, 1);
  auto b = ingest(docs, IngestConfig{}, 4);
  auto fa = (tmp.path / "a.idx").string();
  auto fb = (tmp.path / "b.idx").string();
  a.save(fa);
  b.save(fb);
  CHECK(testutil::read_file(fa) == testutil::read_file(fb));
}

TEST_CASE("corrupt index files are rejected") {
  TempDir tmp;
  auto index = random_index(1);
  auto file = (tmp.path / "x.idx").string();
  index.save(file);
  auto bytes = testutil::read_file(file);
  testutil::write_file(tmp.path / "trunc.idx", bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(CorpusIndex::load((tmp.path / "trunc.idx").string()), DataError);
  testutil::write_file(tmp.path / "junk.idx", "not an index\n");
  CHECK_THROWS_AS(CorpusIndex::load((tmp.path / "junk.idx").string()), DataError);
  CHECK_THROWS_AS(CorpusIndex::load((tmp.path / "absent.idx").string()), DataError);
}
