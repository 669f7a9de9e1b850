#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexsig/corpus.hpp"
#include "lexsig/occurrences.hpp"

namespace lexsig {

enum class MeasureId { csa, llr, pmi, sci, cwcd, chi_square, t_test, dice, ochiai, jaccard };

inline constexpr MeasureId all_measures[] = {
    MeasureId::csa,  MeasureId::llr,        MeasureId::pmi,    MeasureId::sci,
    MeasureId::cwcd, MeasureId::chi_square, MeasureId::t_test, MeasureId::dice,
    MeasureId::ochiai, MeasureId::jaccard};

// Documented properties: symmetry, invariance under data containing neither
// word, invariance under corpus replication. Descriptive metadata only; not
// consulted by score().
struct MeasureInfo {
  const char* name;
  bool symmetric;
  bool null_addition;
  bool homogeneous;
};

const MeasureInfo& measure_info(MeasureId id);
std::optional<MeasureId> measure_from_name(std::string_view name);

struct MeasureInputs {
  uint64_t f_x = 0;           // unigram frequency of x
  uint64_t f_y = 0;           // unigram frequency of y
  uint64_t f_hat = 0;         // corpus-wide span-constrained bigram frequency
  uint64_t total_tokens = 0;  // N
  size_t joint_docs = 0;      // K
  std::vector<uint32_t> spans;  // spans of the f_hat counted occurrences
};

MeasureInputs make_measure_inputs(const CorpusIndex& index, const BigramPair& pair,
                                  std::span<const DocPairStats> stats);
// (y, x) orientation of the same evidence.
MeasureInputs swapped(const MeasureInputs& in);

struct MeasureOptions {
  // Report -inf instead of no value when f_hat = 0 makes a score undefined.
  bool neg_inf_for_undefined = false;
  // Report the likelihood-ratio statistic scaled by 2N.
  bool llr_scaled = false;
};

// No value when the score is undefined for the inputs (log or ratio of a zero
// span-constrained frequency, zero-variance t denominator).
std::optional<double> score(MeasureId id, const MeasureInputs& in, const MeasureOptions& opt = {});

struct RankedScore {
  BigramPair pair;
  std::optional<double> value;
  size_t rank = 0;  // 1-based
};

// Descending by score; undefined scores sort below all defined ones; ties
// break lexicographically by (x, y).
std::vector<RankedScore> rank(MeasureId id,
                              std::span<const std::pair<BigramPair, MeasureInputs>> items,
                              const MeasureOptions& opt = {});

struct PropertyTransform {
  unsigned replicate = 1;   // merge this many copies of the corpus
  uint64_t null_add = 0;    // extra tokens containing neither word
};

// (score on original inputs, score on transformed inputs)
std::pair<std::optional<double>, std::optional<double>> property_check(
    MeasureId id, const MeasureInputs& in, const PropertyTransform& transform,
    const MeasureOptions& opt = {});

}  // namespace lexsig
