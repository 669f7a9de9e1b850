#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexsig/measures.hpp"
#include "lexsig/significance.hpp"

namespace lexsig {

struct WordPairDataset {
  struct Entry {
    std::string w1, w2;
    double score;  // human judgment
  };
  std::string name;
  std::vector<Entry> entries;
};

struct DatasetOptions {
  bool keep_first_duplicate = false;  // default: duplicate pairs are an error
};

// Whitespace-separated lines: word1 word2 score. '#' lines and blank lines
// are skipped.
WordPairDataset load_dataset(const std::filesystem::path& file, const DatasetOptions& opt = {});

// 1-based ascending ranks, ties averaged.
std::vector<double> average_ranks(std::span<const double> values);

// Rank correlation with average-rank tie handling; NaN when either side has
// zero rank variance. Inputs are score vectors over the same items.
double spearman(std::span<const double> a, std::span<const double> b);

// Per-span computation shared by every evaluation step: normalized pairs,
// per-document stats, and measure inputs. Pairs whose words do not reduce to
// single distinct in-corpus tokens, or that share no document, are excluded.
struct PairBatch {
  uint32_t span = 0;
  std::vector<BigramPair> pairs;   // dataset order, normalized
  std::vector<double> human;       // aligned with pairs
  std::vector<std::vector<DocPairStats>> stats;  // aligned; empty when excluded
  std::vector<MeasureInputs> inputs;             // aligned; meaningful when included
  std::vector<std::string> reasons;              // aligned; empty when included
  std::vector<size_t> included;                  // indices with at least one joint document
  struct Excluded {
    BigramPair pair;
    std::string reason;
  };
  std::vector<Excluded> excluded;
};

PairBatch compute_pair_batch(const CorpusIndex& index, const WordPairDataset& dataset,
                             uint32_t span, unsigned jobs = 1);

// Scores over batch.included; undefined scores map to -inf so they rank last.
std::vector<double> measure_scores(const PairBatch& batch, MeasureId id,
                                   const MeasureOptions& opt = {});
// CSR ratio over batch.included.
std::vector<double> csr_scores(const PairBatch& batch, double epsilon, double delta,
                               const PiSource& pi);

using PiProvider = std::function<const PiSource&(uint32_t span)>;

struct EvalSettings {
  std::vector<uint32_t> spans{5, 25, 50};
  std::vector<double> epsilon_grid{0.05, 0.1, 0.4, 0.5, 0.99};
  std::vector<double> delta_grid{0.0005, 0.005, 0.01, 0.1, 0.4, 0.9};
  std::array<TypeSettings, 4> types = default_type_settings();
  std::vector<MeasureId> measures{std::begin(all_measures), std::end(all_measures)};
  double effectiveness_threshold = 0.90;
  size_t top_k = 10;
  MeasureOptions measure_options{};
  unsigned jobs = 1;
};

struct EffectivenessCell {
  MeasureId measure;
  uint32_t span = 0;
  std::array<double, 4> rho{};  // vs CSR per type
  std::array<bool, 4> effective{};
};

struct GridBest {
  double epsilon = 0;
  double delta = 0;
  double rho = 0;
};

// Highest-correlation grid point for a fixed ranking; ties keep the earliest
// point in (epsilon-major, delta-minor) order.
GridBest best_parameter_scan(const PairBatch& batch, std::span<const double> ranking_scores,
                             std::span<const double> epsilon_grid,
                             std::span<const double> delta_grid, const PiSource& pi);

struct HumanCorrelation {
  double rho = 0;
  size_t used = 0;   // pairs with a defined score
  size_t total = 0;  // pairs offered
};

// Correlation against human judgments over the pairs whose score is defined.
HumanCorrelation human_correlation(std::span<const double> human,
                                   std::span<const std::optional<double>> scores);

struct TopKRow {
  size_t rank = 0;
  BigramPair pair;
  std::optional<double> score;
  std::vector<std::optional<size_t>> cross;  // rank in every list, aligned with labels
};

struct TopKList {
  std::string label;
  std::vector<TopKRow> rows;
};

struct TopKReport {
  uint32_t span = 0;
  size_t k = 0;
  bool truncated = false;  // some list was shorter than k
  std::vector<std::string> labels;
  std::vector<TopKList> lists;
};

TopKReport top_k_report(std::span<const std::pair<std::string, std::vector<RankedScore>>> lists,
                        size_t k);

struct ScanRow {
  MeasureId measure;
  uint32_t span = 0;
  GridBest best;
  std::string type_label;  // letter when the winner matches a default type
};

struct HumanRow {
  std::string label;  // measure name or "csr_A"
  uint32_t span = 0;
  HumanCorrelation corr;
};

struct EvaluationRun {
  std::string dataset_name;
  size_t dataset_pairs = 0;
  EvalSettings settings;
  std::vector<EffectivenessCell> effectiveness;
  std::vector<ScanRow> scans;
  std::vector<HumanRow> human;
  std::vector<TopKReport> topk;  // one per span
  struct RankRow {
    uint32_t span = 0;
    std::string label;
    BigramPair pair;
    std::optional<double> value;
    size_t rank = 0;
  };
  std::vector<RankRow> rankings;
  std::vector<PairBatch::Excluded> excluded;  // identical across spans
};

EvaluationRun run_evaluation(const CorpusIndex& index, const WordPairDataset& dataset,
                             const EvalSettings& settings, const PiProvider& pi_for_span);

// Shared deterministic number rendering for every exporter.
std::string fmt_num(double v);
std::string json_escape(std::string_view s);

void write_effectiveness_tsv(std::ostream& out, const EvaluationRun& run);
void write_effectiveness_jsonl(std::ostream& out, const EvaluationRun& run);
void write_scans_tsv(std::ostream& out, const EvaluationRun& run);
void write_scans_jsonl(std::ostream& out, const EvaluationRun& run);
void write_human_tsv(std::ostream& out, const EvaluationRun& run);
void write_human_jsonl(std::ostream& out, const EvaluationRun& run);
void write_topk_tsv(std::ostream& out, const EvaluationRun& run);
void write_topk_jsonl(std::ostream& out, const EvaluationRun& run);
void write_rankings_tsv(std::ostream& out, const EvaluationRun& run);
void write_excluded_tsv(std::ostream& out, const EvaluationRun& run);
void write_markdown(std::ostream& out, const EvaluationRun& run);

}  // namespace lexsig
