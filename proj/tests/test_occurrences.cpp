#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "lexsig/error.hpp"
#include "lexsig/occurrences.hpp"

using namespace lexsig;

TEST_CASE("pairing on hand-worked position lists") {
  std::vector<uint32_t> xs = {1, 5};
  std::vector<uint32_t> ys = {3, 7};
  auto free_pairing = max_nonoverlapped(xs, ys);
  CHECK(free_pairing.count == 2);
  REQUIRE(free_pairing.intervals.size() == 2);
  CHECK(free_pairing.intervals[0] == std::pair<uint32_t, uint32_t>{1, 3});
  CHECK(free_pairing.intervals[1] == std::pair<uint32_t, uint32_t>{5, 7});
  CHECK(free_pairing.spans() == std::vector<uint32_t>{2, 2});

  CHECK(span_constrained(xs, ys, 3).count == 2);
  CHECK(span_constrained(xs, ys, 2).count == 0);

  // a later x can supersede a pending one
  std::vector<uint32_t> xs2 = {1, 2};
  std::vector<uint32_t> ys2 = {3};
  auto p2 = max_nonoverlapped(xs2, ys2);
  CHECK(p2.count == 1);
  CHECK(p2.intervals[0] == std::pair<uint32_t, uint32_t>{2, 3});

  // order of the two words inside an interval does not matter
  std::vector<uint32_t> xs3 = {5};
  std::vector<uint32_t> ys3 = {2};
  auto p3 = max_nonoverlapped(xs3, ys3);
  CHECK(p3.count == 1);
  CHECK(p3.intervals[0] == std::pair<uint32_t, uint32_t>{2, 5});
}

TEST_CASE("span threshold is strict") {
  std::vector<uint32_t> xs = {1};
  std::vector<uint32_t> ys = {4};  // span 3
  CHECK(span_constrained(xs, ys, 3).count == 0);
  CHECK(span_constrained(xs, ys, 4).count == 1);
  CHECK_THROWS_AS(span_constrained(xs, ys, 0), UsageError);
}

TEST_CASE("empty and degenerate inputs") {
  std::vector<uint32_t> some = {1, 2};
  std::vector<uint32_t> none;
  CHECK(max_nonoverlapped(some, none).count == 0);
  CHECK(max_nonoverlapped(none, some).count == 0);
  CHECK(max_nonoverlapped(none, none).count == 0);
}

TEST_CASE("overlapping position lists are rejected") {
  std::vector<uint32_t> xs = {1, 4};
  std::vector<uint32_t> ys = {4, 9};
  CHECK_THROWS_AS(max_nonoverlapped(xs, ys), DataError);
}

TEST_CASE("greedy matches the exhaustive oracle on adversarial cases") {
  // pairing (1,2) then (3,50) keeps f = 2 even though 3 < 50 is wide
  std::vector<uint32_t> xs = {1, 3};
  std::vector<uint32_t> ys = {2, 50};
  auto [f, f_hat] = brute_force_pair_oracle(xs, ys, 5);
  CHECK(f == 2);
  CHECK(f_hat == 1);
  CHECK(max_nonoverlapped(xs, ys).count == f);
  CHECK(span_constrained(xs, ys, 5).count == f_hat);
}

static void random_instance(std::mt19937_64& rng, std::vector<uint32_t>& xs,
                            std::vector<uint32_t>& ys) {
  std::set<uint32_t> used;
  int nx = 1 + static_cast<int>(rng() % 10);
  int ny = 1 + static_cast<int>(rng() % 10);
  while (static_cast<int>(used.size()) < nx + ny) used.insert(1 + rng() % 40);
  std::vector<uint32_t> all(used.begin(), used.end());
  std::shuffle(all.begin(), all.end(), rng);
  xs.assign(all.begin(), all.begin() + nx);
  ys.assign(all.begin() + nx, all.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
}

TEST_CASE("greedy equals the oracle on random instances") {
  std::mt19937_64 rng(20260822);
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<uint32_t> xs, ys;
    random_instance(rng, xs, ys);
    uint32_t x = 1 + rng() % 42;
    auto [f, f_hat] = brute_force_pair_oracle(xs, ys, x);
    auto free_pairing = max_nonoverlapped(xs, ys);
    auto tight_pairing = span_constrained(xs, ys, x);
    CHECK(free_pairing.count == f);
    CHECK(tight_pairing.count == f_hat);

    // structural invariants of the reported intervals
    for (const auto& pairing : {free_pairing, tight_pairing}) {
      CHECK(pairing.intervals.size() == static_cast<size_t>(pairing.count));
      uint32_t prev_end = 0;
      for (auto [a, b] : pairing.intervals) {
        CHECK(a > prev_end);
        CHECK(b > a);
        prev_end = b;
      }
    }
    for (uint32_t s : tight_pairing.spans()) CHECK(s < x);
    CHECK(tight_pairing.count <= free_pairing.count);
  }
}

TEST_CASE("oracle refuses oversized instances") {
  std::vector<uint32_t> xs, ys;
  for (uint32_t i = 1; i <= 11; ++i) xs.push_back(2 * i);
  for (uint32_t i = 1; i <= 11; ++i) ys.push_back(2 * i + 1);
  CHECK_THROWS_AS(brute_force_pair_oracle(xs, ys, 5), CapacityError);
}

TEST_CASE("pair_stats collects per-document counts") {
  std::vector<RawDocument> docs = {
      {"d0", testutil::planted_text(10, 2, 4)},   // span 2
      {"d1", testutil::planted_text(10, 1, 9)},   // span 8
      {"d2", "pad pad pad"},                      // neither word
      {"d3", "alpha pad pad"},                    // only x
      {"d4", testutil::planted_text(12, 7, 3)},   // span 4, y first
  };
  auto index = ingest(docs, IngestConfig{});
  auto stats = pair_stats(index, {"alpha", "beta"}, 5);
  REQUIRE(stats.size() == 3);

  CHECK(stats[0].doc == 0);
  CHECK(stats[0].length == 10);
  CHECK(stats[0].f == 1);
  CHECK(stats[0].f_hat == 1);
  CHECK(stats[0].close_spans == std::vector<uint32_t>{2});

  CHECK(stats[1].doc == 1);
  CHECK(stats[1].f == 1);
  CHECK(stats[1].f_hat == 0);
  CHECK(stats[1].spans == std::vector<uint32_t>{8});
  CHECK(stats[1].close_spans.empty());

  CHECK(stats[2].doc == 4);
  CHECK(stats[2].length == 12);
  CHECK(stats[2].f_hat == 1);
  CHECK(stats[2].close_spans == std::vector<uint32_t>{4});

  // 2f never exceeds the document length
  for (const auto& s : stats) CHECK(2 * s.f <= static_cast<int>(s.length));

  CHECK_THROWS_AS(pair_stats(index, {"alpha", "alpha"}, 5), DataError);
  CHECK_THROWS_AS(pair_stats(index, {"alpha", "beta"}, 0), UsageError);
}
