#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lexsig/corpus.hpp"

namespace testutil {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = std::filesystem::temp_directory_path() /
           ("lexsig_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// One document of `len` filler tokens with `x` and `y` planted at the given
// 1-based positions.
inline std::string planted_text(uint32_t len, uint32_t pos_x, uint32_t pos_y,
                                const std::string& x = "alpha", const std::string& y = "beta") {
  std::string text;
  for (uint32_t p = 1; p <= len; ++p) {
    if (p > 1) text += ' ';
    if (p == pos_x) text += x;
    else if (p == pos_y) text += y;
    else text += "pad";
  }
  return text;
}

// Every document carries one (alpha, beta) occurrence with span < max span.
inline std::vector<lexsig::RawDocument> planted_corpus(size_t docs, uint32_t len,
                                                       uint32_t below_span, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<lexsig::RawDocument> out;
  out.reserve(docs);
  for (size_t d = 0; d < docs; ++d) {
    std::uniform_int_distribution<uint32_t> span_dist(1, below_span - 1);
    uint32_t span = span_dist(rng);
    std::uniform_int_distribution<uint32_t> start_dist(1, len - span);
    uint32_t start = start_dist(rng);
    bool swap = rng() & 1;
    uint32_t px = swap ? start + span : start;
    uint32_t py = swap ? start : start + span;
    out.push_back({"doc" + std::to_string(d), planted_text(len, px, py)});
  }
  return out;
}

// One alpha and one beta at uniform random distinct positions per document.
inline std::vector<lexsig::RawDocument> null_corpus(size_t docs, uint32_t len, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> pos_dist(1, len);
  std::vector<lexsig::RawDocument> out;
  out.reserve(docs);
  for (size_t d = 0; d < docs; ++d) {
    uint32_t a = pos_dist(rng);
    uint32_t b = a;
    while (b == a) b = pos_dist(rng);
    out.push_back({"doc" + std::to_string(d), planted_text(len, a, b)});
  }
  return out;
}

// Deterministic mixed-strength corpus for evaluation tests: a tight pair on
// every document, a medium pair on even documents, a loose pair on a few.
inline std::vector<lexsig::RawDocument> graded_corpus(size_t docs, uint32_t len, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<lexsig::RawDocument> out;
  out.reserve(docs);
  for (size_t d = 0; d < docs; ++d) {
    std::vector<std::string> toks(len);
    for (uint32_t p = 0; p < len; ++p) toks[p] = "w" + std::to_string(rng() % 50);
    auto place = [&](const std::string& a, const std::string& b, uint32_t gap) {
      std::uniform_int_distribution<uint32_t> start_dist(0, len - gap - 1);
      uint32_t s = start_dist(rng);
      toks[s] = a;
      toks[s + gap] = b;
    };
    place("north", "south", 1 + static_cast<uint32_t>(rng() % 3));
    if (d % 2 == 0) place("red", "blue", 4 + static_cast<uint32_t>(rng() % 10));
    if (d % 5 == 0) place("cat", "dog", 8 + static_cast<uint32_t>(rng() % 20));
    std::string text;
    for (uint32_t p = 0; p < len; ++p) {
      if (p) text += ' ';
      text += toks[p];
    }
    out.push_back({"doc" + std::to_string(d), text});
  }
  return out;
}

inline std::string graded_dataset_text() {
  return "north south 9.0\n"
         "red blue 6.5\n"
         "cat dog 3.0\n"
         "north blue 2.0\n"
         "missing word 1.0\n";
}

}  // namespace testutil
