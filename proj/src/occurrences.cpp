#include "lexsig/occurrences.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "lexsig/error.hpp"

namespace lexsig {

namespace {

constexpr uint32_t kUnbounded = std::numeric_limits<uint32_t>::max();

struct Token {
  uint32_t pos;
  bool is_x;
};

std::vector<Token> merge_positions(std::span<const uint32_t> pos_x,
                                   std::span<const uint32_t> pos_y) {
  std::vector<Token> tokens;
  tokens.reserve(pos_x.size() + pos_y.size());
  size_t i = 0, j = 0;
  while (i < pos_x.size() || j < pos_y.size()) {
    bool take_x = j >= pos_y.size() || (i < pos_x.size() && pos_x[i] < pos_y[j]);
    if (!take_x && i < pos_x.size() && pos_x[i] == pos_y[j])
      throw DataError("position lists overlap: both words at position " +
                      std::to_string(pos_x[i]));
    tokens.push_back(take_x ? Token{pos_x[i++], true} : Token{pos_y[j++], false});
  }
  return tokens;
}

// Left-to-right sweep keeping one pending token. Closing at the earliest
// qualifying endpoint never loses an occurrence: any pairing using a later
// endpoint for the pending token can be exchanged interval by interval.
Pairing greedy(std::span<const uint32_t> pos_x, std::span<const uint32_t> pos_y,
               uint32_t x_threshold) {
  Pairing out;
  std::optional<Token> pending;
  for (const Token& t : merge_positions(pos_x, pos_y)) {
    if (!pending) {
      pending = t;
      continue;
    }
    if (pending->is_x == t.is_x) {
      pending = t;  // same word: later start can only help
      continue;
    }
    if (t.pos - pending->pos < x_threshold) {
      out.intervals.emplace_back(pending->pos, t.pos);
      pending.reset();
    } else {
      pending = t;
    }
  }
  out.count = static_cast<int>(out.intervals.size());
  return out;
}

}  // namespace

std::vector<uint32_t> Pairing::spans() const {
  std::vector<uint32_t> out;
  out.reserve(intervals.size());
  for (const auto& [a, b] : intervals) out.push_back(b - a);
  return out;
}

Pairing max_nonoverlapped(std::span<const uint32_t> pos_x, std::span<const uint32_t> pos_y) {
  return greedy(pos_x, pos_y, kUnbounded);
}

Pairing span_constrained(std::span<const uint32_t> pos_x, std::span<const uint32_t> pos_y,
                         uint32_t x_threshold) {
  if (x_threshold < 1) throw UsageError("span threshold must be >= 1");
  return greedy(pos_x, pos_y, x_threshold);
}

std::pair<int, int> brute_force_pair_oracle(std::span<const uint32_t> pos_x,
                                            std::span<const uint32_t> pos_y,
                                            uint32_t x_threshold) {
  if (pos_x.size() + pos_y.size() > 20)
    throw CapacityError("oracle instance too large (> 20 positions)");
  auto tokens = merge_positions(pos_x, pos_y);
  const size_t n = tokens.size();

  // best[i] = largest qualifying disjoint set within tokens[i..); the leftmost
  // chosen interval either skips tokens[i] or pairs it with a later opposite
  // token, burning everything in between.
  auto solve = [&](uint32_t bound) {
    std::vector<int> best(n + 1, 0);
    for (size_t i = n; i-- > 0;) {
      int b = best[i + 1];
      for (size_t q = i + 1; q < n; ++q) {
        if (tokens[q].is_x == tokens[i].is_x) continue;
        if (tokens[q].pos - tokens[i].pos < bound) b = std::max(b, 1 + best[q + 1]);
      }
      best[i] = b;
    }
    return best[0];
  };
  return {solve(kUnbounded), solve(x_threshold)};
}

std::vector<DocPairStats> pair_stats(const CorpusIndex& index, const BigramPair& pair,
                                     uint32_t x_threshold) {
  if (x_threshold < 1) throw UsageError("span threshold must be >= 1");
  if (pair.x == pair.y) throw DataError("invalid bigram: words must differ (" + pair.x + ")");
  std::vector<DocPairStats> out;
  const auto* px = index.postings(pair.x);
  const auto* py = index.postings(pair.y);
  if (!px || !py) return out;
  size_t i = 0, j = 0;
  while (i < px->size() && j < py->size()) {
    uint32_t a = (*px)[i].doc, b = (*py)[j].doc;
    if (a < b) {
      ++i;
      continue;
    }
    if (b < a) {
      ++j;
      continue;
    }
    DocPairStats stats;
    stats.doc = a;
    stats.length = index.doc(a).length;
    Pairing full = max_nonoverlapped((*px)[i].positions, (*py)[j].positions);
    Pairing close = span_constrained((*px)[i].positions, (*py)[j].positions, x_threshold);
    stats.f = full.count;
    stats.f_hat = close.count;
    stats.spans = full.spans();
    stats.close_spans = close.spans();
    out.push_back(std::move(stats));
    ++i;
    ++j;
  }
  return out;
}

}  // namespace lexsig
