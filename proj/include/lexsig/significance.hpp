#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexsig/corpus.hpp"
#include "lexsig/histogram.hpp"
#include "lexsig/occurrences.hpp"

namespace lexsig {

struct SignificanceParams {
  double epsilon = 0.1;  // document-level rarity level, in (0, 1)
  double delta = 0.1;    // corpus-level false-alarm bound, in (0, 1)
  uint32_t x_threshold = 0;
};

struct CsrResult {
  size_t K = 0;   // documents containing both words
  int Z = 0;      // documents whose span-constrained frequency is epsilon-rare
  double ez = 0;  // expected Z under the null
  double t = 0;   // deviation sqrt(-ln(delta) / (2K))
  double threshold = 0;  // ez + K * t
  double csr = 0;        // Z / threshold
  bool significant = false;
};

// 1 when the document's f_hat reaches the epsilon-rare level g_epsilon(f, ell),
// 0 otherwise (also when that level is unattainable).
int document_support(const DocPairStats& stats, double epsilon, const PiSource& pi);

// Sum over documents of pi(g_epsilon(f_i, ell_i), f_i, ell_i); unattainable
// documents contribute 0.
double expected_Z(std::span<const DocPairStats> stats, double epsilon, const PiSource& pi);

CsrResult csr_decision(size_t K, int Z, double ez, double delta);

CsrResult csr_from_stats(std::span<const DocPairStats> stats, const SignificanceParams& params,
                         const PiSource& pi);
CsrResult csr(const CorpusIndex& index, const BigramPair& pair, const SignificanceParams& params,
              const PiSource& pi);

enum class CoocType { A, B, C, D };
const char* to_string(CoocType type);

struct TypeSettings {
  double epsilon;
  double delta;
};

// A: strong in documents, high corpus confidence; B: weak in documents, high
// confidence; C: strong in documents, low confidence; D: weak, low confidence.
std::array<TypeSettings, 4> default_type_settings();

struct Classification {
  std::array<CsrResult, 4> by_type;  // indexed by CoocType
  std::array<bool, 4> significant{};
  // {A} when A holds; otherwise the significant subset of {B, C}; otherwise
  // {D}; otherwise empty.
  std::vector<CoocType> exclusive;
  std::string exclusive_label() const;  // "A", "B", "C", "B,C", "D" or "-"
};

std::vector<CoocType> exclusive_types(const std::array<bool, 4>& significant);

Classification classify_from_stats(std::span<const DocPairStats> stats, const PiSource& pi,
                                   const std::array<TypeSettings, 4>& types = default_type_settings());
Classification classify(const CorpusIndex& index, const BigramPair& pair, uint32_t x_threshold,
                        const PiSource& pi,
                        const std::array<TypeSettings, 4>& types = default_type_settings());

}  // namespace lexsig
