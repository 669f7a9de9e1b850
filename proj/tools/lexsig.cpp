#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexsig/commands.hpp"
#include "lexsig/error.hpp"
#include "lexsig/parallel.hpp"

using namespace lexsig;

int main(int argc, char** argv) {
  CLI::App app{"Detection, classification and scoring of significant lexical co-occurrences"};
  app.require_subcommand(1);

  IndexArgs index_args;
  index_args.jobs = default_jobs();
  bool no_fold = false;
  auto* index_cmd = app.add_subcommand("index", "Build a corpus index");
  index_cmd->add_option("--corpus", index_args.corpus_dir, "Directory with one document per file");
  index_cmd->add_option("--lines", index_args.lines_file, "File with one document per line");
  index_cmd->add_option("--out", index_args.out, "Index file to write")->required();
  index_cmd->add_option("--max-doc-length", index_args.config.max_doc_length,
                        "Chunk longer documents to this many words")
      ->capture_default_str();
  index_cmd->add_flag("--no-case-fold", no_fold, "Keep the original token case");
  index_cmd->add_option("--jobs", index_args.jobs, "Worker threads")->capture_default_str();

  TablesArgs tables_args;
  bool tables_float = false;
  auto* tables_cmd = app.add_subcommand("tables", "Publish null-model probability tables");
  tables_cmd->add_option("--x", tables_args.x_values, "Span thresholds to publish")
      ->delimiter(',')
      ->capture_default_str();
  tables_cmd->add_option("--f-max", tables_args.f_max, "Largest per-document frequency covered")
      ->capture_default_str();
  tables_cmd->add_option("--ell-max", tables_args.ell_max, "Largest document length covered")
      ->capture_default_str();
  tables_cmd->add_flag("--float", tables_float,
                       "Floating-point counts instead of exact arithmetic");
  tables_cmd->add_option("--out", tables_args.out_file, "Output file (single --x only)");
  tables_cmd->add_option("--out-dir", tables_args.out_dir, "Output directory");
  tables_cmd->add_option("--tsv", tables_args.tsv, "Also export the table as TSV (single --x)");
  tables_cmd->add_option("--cap-f", tables_args.limits.f_max, "Capacity cap on f")
      ->capture_default_str();
  tables_cmd->add_option("--cap-ell", tables_args.limits.ell_max, "Capacity cap on ell")
      ->capture_default_str();

  ScoreArgs score_args;
  score_args.jobs = default_jobs();
  std::vector<std::string> pair_words;
  std::vector<std::string> measure_names;
  std::string table_path;
  bool score_float = false;
  auto add_scoring_opts = [&](CLI::App* cmd) {
    cmd->add_option("--index", score_args.index_file, "Corpus index file")->required();
    cmd->add_option("--span", score_args.span, "Span threshold in words")->required();
    cmd->add_option("--table", table_path, "Published table file or directory (default: env LEXSIG_TABLE_DIR)");
    cmd->add_option("--pair", pair_words, "A single word pair")->expected(2);
    cmd->add_option("--dataset", score_args.dataset, "Word-pair dataset file");
    cmd->add_option("--measures", measure_names, "Measures to score (names or 'all')")
        ->delimiter(',');
    cmd->add_flag("--neg-inf", score_args.measure_options.neg_inf_for_undefined,
                  "Report -inf instead of no value for undefined scores");
    cmd->add_flag("--llr-scaled", score_args.measure_options.llr_scaled,
                  "Scale the likelihood-ratio statistic by 2N");
    cmd->add_option("--out", score_args.out, "Output file (default: stdout)");
    cmd->add_option("--format", score_args.format, "tsv or jsonl")->capture_default_str();
    cmd->add_option("--stats-tsv", score_args.stats_tsv, "Dump per-document stats to this TSV");
    cmd->add_flag("--float", score_float, "Floating-point null model");
    cmd->add_option("--cap-f", score_args.limits.f_max, "Capacity cap on f")
        ->capture_default_str();
    cmd->add_option("--cap-ell", score_args.limits.ell_max, "Capacity cap on ell")
        ->capture_default_str();
    cmd->add_option("--jobs", score_args.jobs, "Worker threads")->capture_default_str();
  };
  auto* score_cmd = app.add_subcommand("score", "Score pairs with the significance test and measures");
  add_scoring_opts(score_cmd);
  score_cmd->add_option("--epsilon", score_args.epsilon, "Document-level rarity level")
      ->capture_default_str();
  score_cmd->add_option("--delta", score_args.delta, "Corpus-level false-alarm bound")
      ->capture_default_str();
  auto* classify_cmd =
      app.add_subcommand("classify", "Score pairs and report co-occurrence types A-D");
  add_scoring_opts(classify_cmd);

  EvaluateArgs eval_args;
  eval_args.settings.jobs = default_jobs();
  std::vector<std::string> eval_measure_names;
  std::string eval_table_path;
  bool eval_float = false;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Benchmark measures against the significance test on a dataset");
  eval_cmd->add_option("--index", eval_args.index_file, "Corpus index file")->required();
  eval_cmd->add_option("--dataset", eval_args.dataset, "Word-pair dataset file")->required();
  eval_cmd->add_option("--out-dir", eval_args.out_dir, "Report directory")->required();
  eval_cmd->add_option("--table", eval_table_path,
                       "Published table directory (default: env LEXSIG_TABLE_DIR)");
  eval_cmd->add_option("--spans", eval_args.settings.spans, "Span thresholds")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--epsilon-grid", eval_args.settings.epsilon_grid, "Epsilon grid")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--delta-grid", eval_args.settings.delta_grid, "Delta grid")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--threshold", eval_args.settings.effectiveness_threshold,
                       "Effectiveness correlation threshold")
      ->capture_default_str();
  eval_cmd->add_option("--top-k", eval_args.settings.top_k, "Rows per top-k table")
      ->capture_default_str();
  eval_cmd->add_option("--measures", eval_measure_names, "Measures (names or 'all')")
      ->delimiter(',');
  eval_cmd->add_flag("--neg-inf", eval_args.settings.measure_options.neg_inf_for_undefined,
                     "Report -inf instead of no value for undefined scores");
  eval_cmd->add_flag("--llr-scaled", eval_args.settings.measure_options.llr_scaled,
                     "Scale the likelihood-ratio statistic by 2N");
  eval_cmd->add_flag("--float", eval_float, "Floating-point null model");
  eval_cmd->add_option("--cap-f", eval_args.limits.f_max, "Capacity cap on f")
      ->capture_default_str();
  eval_cmd->add_option("--cap-ell", eval_args.limits.ell_max, "Capacity cap on ell")
      ->capture_default_str();
  eval_cmd->add_option("--jobs", eval_args.settings.jobs, "Worker threads")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto table_or_env = [](const std::string& flag) -> std::optional<std::filesystem::path> {
    if (!flag.empty()) return std::filesystem::path(flag);
    const char* env = std::getenv("LEXSIG_TABLE_DIR");
    if (env && *env) return std::filesystem::path(env);
    return std::nullopt;
  };

  try {
    if (index_cmd->parsed()) {
      index_args.config.case_fold = !no_fold;
      return cmd_index(index_args);
    }
    if (tables_cmd->parsed()) {
      if (tables_float) tables_args.mode = HistMode::floating;
      return cmd_tables(tables_args);
    }
    if (score_cmd->parsed() || classify_cmd->parsed()) {
      score_args.classify_types = classify_cmd->parsed();
      if (score_float) score_args.mode = HistMode::floating;
      if (!measure_names.empty()) score_args.measures = parse_measures(measure_names);
      if (!pair_words.empty()) score_args.pair = {pair_words[0], pair_words[1]};
      score_args.table = table_or_env(table_path);
      return cmd_score(score_args);
    }
    if (eval_cmd->parsed()) {
      if (eval_float) eval_args.mode = HistMode::floating;
      if (!eval_measure_names.empty())
        eval_args.settings.measures = parse_measures(eval_measure_names);
      eval_args.table = table_or_env(eval_table_path);
      return cmd_evaluate(eval_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
