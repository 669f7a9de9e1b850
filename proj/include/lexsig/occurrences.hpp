#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexsig/corpus.hpp"

namespace lexsig {

struct BigramPair {
  std::string x, y;  // x != y
};

inline bool operator==(const BigramPair& a, const BigramPair& b) {
  return a.x == b.x && a.y == b.y;
}
inline bool operator<(const BigramPair& a, const BigramPair& b) {
  return a.x != b.x ? a.x < b.x : a.y < b.y;
}

struct Pairing {
  int count = 0;
  // (first, last) positions per occurrence, disjoint, increasing
  std::vector<std::pair<uint32_t, uint32_t>> intervals;
  std::vector<uint32_t> spans() const;  // last - first per interval
};

// Largest set of pairwise-disjoint intervals, each covering one position of
// each word. Positions must be sorted, 1-based, and the two lists disjoint.
Pairing max_nonoverlapped(std::span<const uint32_t> pos_x, std::span<const uint32_t> pos_y);

// Same, but every interval must have span (last - first) < x_threshold.
Pairing span_constrained(std::span<const uint32_t> pos_x, std::span<const uint32_t> pos_y,
                         uint32_t x_threshold);

// Exhaustive maximization over all disjoint pairings; returns (f, f_hat).
// Refuses instances with more than 20 positions total.
std::pair<int, int> brute_force_pair_oracle(std::span<const uint32_t> pos_x,
                                            std::span<const uint32_t> pos_y,
                                            uint32_t x_threshold);

struct DocPairStats {
  uint32_t doc = 0;     // ordinal in the index
  uint32_t length = 0;  // document length in tokens
  int f = 0;            // max non-overlapped occurrences
  int f_hat = 0;        // max occurrences with span < threshold
  std::vector<uint32_t> spans;        // spans of the f chosen occurrences
  std::vector<uint32_t> close_spans;  // spans of the f_hat constrained occurrences
};

// One entry per document containing both words, sorted by document ordinal.
std::vector<DocPairStats> pair_stats(const CorpusIndex& index, const BigramPair& pair,
                                     uint32_t x_threshold);

}  // namespace lexsig
