#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lexsig/evaluation.hpp"

namespace lexsig {

// Resolves the probability source per span: a published table (strict lookups)
// when a table file or directory is configured, a live engine otherwise.
class PiCache {
public:
  PiCache(std::optional<std::filesystem::path> table, HistMode mode, HistLimits limits);
  const PiSource& for_span(uint32_t span);

private:
  std::optional<std::filesystem::path> table_;
  HistMode mode_;
  HistLimits limits_;
  std::map<uint32_t, std::unique_ptr<PiSource>> sources_;
};

// Conventional file name for a published table inside a directory.
std::filesystem::path table_file_name(uint32_t x_threshold);

std::vector<MeasureId> parse_measures(const std::vector<std::string>& names);

struct IndexArgs {
  std::filesystem::path corpus_dir;  // exactly one of corpus_dir / lines_file
  std::filesystem::path lines_file;
  std::filesystem::path out;
  IngestConfig config;
  unsigned jobs = 1;
};
int cmd_index(const IndexArgs& args);

struct TablesArgs {
  std::vector<uint32_t> x_values{5, 10, 20, 25, 50};
  int f_max = 16;
  uint32_t ell_max = 1500;
  HistMode mode = HistMode::exact;
  std::filesystem::path out_dir;   // default target: out_dir/<table_file_name(x)>
  std::filesystem::path out_file;  // single-x override
  std::filesystem::path tsv;       // optional TSV export, single x only
  HistLimits limits;
};
int cmd_tables(const TablesArgs& args);

struct ScoreArgs {
  std::filesystem::path index_file;
  std::optional<std::filesystem::path> table;  // file or directory
  uint32_t span = 0;
  double epsilon = 0.1;
  double delta = 0.1;
  std::optional<std::pair<std::string, std::string>> pair;
  std::filesystem::path dataset;
  std::vector<MeasureId> measures{std::begin(all_measures), std::end(all_measures)};
  MeasureOptions measure_options;
  bool classify_types = false;
  std::array<TypeSettings, 4> types = default_type_settings();
  std::filesystem::path out;       // empty: stdout
  std::string format = "tsv";      // tsv | jsonl
  std::filesystem::path stats_tsv; // optional per-document dump
  HistMode mode = HistMode::exact;
  HistLimits limits;
  unsigned jobs = 1;
};
int cmd_score(const ScoreArgs& args);

struct EvaluateArgs {
  std::filesystem::path index_file;
  std::optional<std::filesystem::path> table;  // directory
  std::filesystem::path dataset;
  std::filesystem::path out_dir;
  EvalSettings settings;
  HistMode mode = HistMode::exact;
  HistLimits limits;
};
int cmd_evaluate(const EvaluateArgs& args);

}  // namespace lexsig
