#include "lexsig/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lexsig/error.hpp"
#include "lexsig/parallel.hpp"

namespace lexsig {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + p.string());
  return out;
}

std::string flag_code(const std::string& reason) {
  if (reason.empty()) return "ok";
  if (reason == "not a single token") return "not_single_token";
  if (reason == "identical words") return "identical_words";
  if (reason == "word absent from corpus") return "missing_word";
  if (reason == "no joint documents") return "no_joint_docs";
  return "excluded";
}

struct ScoreRecord {
  BigramPair pair;
  std::string flag;  // "ok" or an exclusion code
  size_t K = 0;
  CsrResult single;
  Classification cls;
  std::vector<std::optional<double>> measures;
};

void write_score_tsv(std::ostream& out, const ScoreArgs& args,
                     const std::vector<ScoreRecord>& records) {
  out << "word1\tword2\tflag\tK";
  if (args.classify_types) {
    for (const char* t : {"A", "B", "C", "D"}) out << "\tcsr_" << t << "\tsig_" << t;
    out << "\texclusive";
  } else {
    out << "\tZ\tez\tt\tthreshold\tcsr\tsignificant";
  }
  for (MeasureId m : args.measures) out << '\t' << measure_info(m).name;
  out << '\n';
  for (const auto& r : records) {
    out << r.pair.x << '\t' << r.pair.y << '\t' << r.flag << '\t' << r.K;
    const bool ok = r.flag == "ok";
    if (args.classify_types) {
      for (size_t t = 0; t < 4; ++t) {
        if (ok)
          out << '\t' << fmt_num(r.cls.by_type[t].csr) << '\t' << (r.cls.significant[t] ? 1 : 0);
        else
          out << "\t-\t-";
      }
      out << '\t' << (ok ? r.cls.exclusive_label() : "-");
    } else {
      if (ok)
        out << '\t' << r.single.Z << '\t' << fmt_num(r.single.ez) << '\t' << fmt_num(r.single.t)
            << '\t' << fmt_num(r.single.threshold) << '\t' << fmt_num(r.single.csr) << '\t'
            << (r.single.significant ? 1 : 0);
      else
        out << "\t-\t-\t-\t-\t-\t-";
    }
    for (const auto& v : r.measures) out << '\t' << (ok && v ? fmt_num(*v) : "-");
    out << '\n';
  }
}

void write_score_jsonl(std::ostream& out, const ScoreArgs& args,
                       const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) {
    const bool ok = r.flag == "ok";
    out << "{\"word1\":\"" << json_escape(r.pair.x) << "\",\"word2\":\"" << json_escape(r.pair.y)
        << "\",\"flag\":\"" << r.flag << "\",\"K\":" << r.K;
    if (ok) {
      if (args.classify_types) {
        out << ",\"types\":{";
        for (size_t t = 0; t < 4; ++t) {
          if (t) out << ',';
          out << '"' << to_string(static_cast<CoocType>(t))
              << "\":{\"csr\":" << fmt_num(r.cls.by_type[t].csr)
              << ",\"significant\":" << (r.cls.significant[t] ? "true" : "false") << '}';
        }
        out << "},\"exclusive\":\"" << r.cls.exclusive_label() << '"';
      } else {
        out << ",\"Z\":" << r.single.Z << ",\"ez\":" << fmt_num(r.single.ez)
            << ",\"t\":" << fmt_num(r.single.t) << ",\"threshold\":" << fmt_num(r.single.threshold)
            << ",\"csr\":" << fmt_num(r.single.csr)
            << ",\"significant\":" << (r.single.significant ? "true" : "false");
      }
      out << ",\"measures\":{";
      for (size_t i = 0; i < args.measures.size(); ++i) {
        if (i) out << ',';
        out << '"' << measure_info(args.measures[i]).name << "\":"
            << (r.measures[i] && std::isfinite(*r.measures[i]) ? fmt_num(*r.measures[i]) : "null");
      }
      out << '}';
    }
    out << "}\n";
  }
}

}  // namespace

std::filesystem::path table_file_name(uint32_t x_threshold) {
  return "pi_x" + std::to_string(x_threshold) + ".pit";
}

PiCache::PiCache(std::optional<std::filesystem::path> table, HistMode mode, HistLimits limits)
    : table_(std::move(table)), mode_(mode), limits_(limits) {}

const PiSource& PiCache::for_span(uint32_t span) {
  auto it = sources_.find(span);
  if (it != sources_.end()) return *it->second;
  std::unique_ptr<PiSource> src;
  if (table_) {
    std::filesystem::path file = *table_;
    if (std::filesystem::is_directory(file)) file /= table_file_name(span);
    if (!std::filesystem::exists(file))
      throw DataError("no published table for span " + std::to_string(span) + " at " +
                      file.string() + "; generate one with: lexsig tables --x " +
                      std::to_string(span));
    auto loaded = std::make_unique<PiTable>(PiTable::load(file));
    if (loaded->x_threshold() != span)
      throw DataError("table " + file.string() + " was published for x=" +
                      std::to_string(loaded->x_threshold()) + ", not " + std::to_string(span));
    src = std::move(loaded);
  } else {
    src = std::make_unique<HistEngine>(span, mode_, limits_);
  }
  auto [pos, _] = sources_.emplace(span, std::move(src));
  return *pos->second;
}

std::vector<MeasureId> parse_measures(const std::vector<std::string>& names) {
  std::vector<MeasureId> out;
  for (const auto& name : names) {
    if (name == "all") {
      out.assign(std::begin(all_measures), std::end(all_measures));
      continue;
    }
    auto id = measure_from_name(name);
    if (!id) {
      std::string valid;
      for (MeasureId m : all_measures) {
        if (!valid.empty()) valid += ", ";
        valid += measure_info(m).name;
      }
      throw UsageError("unknown measure '" + name + "' (valid: all, " + valid + ")");
    }
    out.push_back(*id);
  }
  if (out.empty()) throw UsageError("no measures given");
  return out;
}

int cmd_index(const IndexArgs& args) {
  const bool have_dir = !args.corpus_dir.empty();
  const bool have_lines = !args.lines_file.empty();
  if (have_dir == have_lines)
    throw UsageError("give exactly one of --corpus (directory) or --lines (file)");
  if (args.out.empty()) throw UsageError("--out is required");
  std::cerr << "reading corpus...\n";
  auto docs = have_dir ? read_corpus_dir(args.corpus_dir) : read_line_corpus(args.lines_file);
  std::cerr << "indexing " << docs.size() << " raw documents...\n";
  CorpusIndex index = ingest(docs, args.config, args.jobs);
  index.save(args.out);
  std::cout << "indexed " << index.doc_count() << " documents, " << index.total_tokens()
            << " tokens, " << index.vocab_size() << " distinct words -> " << args.out.string()
            << "\n";
  return 0;
}

int cmd_tables(const TablesArgs& args) {
  if (args.x_values.empty()) throw UsageError("no span thresholds given (--x)");
  if (!args.out_file.empty() && args.x_values.size() != 1)
    throw UsageError("--out names a single file; use --out-dir for several span thresholds");
  if (args.out_file.empty() && args.out_dir.empty())
    throw UsageError("give --out (single table) or --out-dir");
  if (!args.tsv.empty() && args.x_values.size() != 1)
    throw UsageError("--tsv exports a single table; give one --x");
  if (!args.out_dir.empty()) std::filesystem::create_directories(args.out_dir);

  for (uint32_t x : args.x_values) {
    std::filesystem::path out =
        !args.out_file.empty() ? args.out_file : args.out_dir / table_file_name(x);
    std::cerr << "computing pi table x=" << x << " f<=" << args.f_max << " ell<=" << args.ell_max
              << "...\n";
    HistEngine engine(x, args.mode, args.limits);
    publish_table(engine, args.f_max, args.ell_max, out);
    std::cout << "published pi table x=" << x << " f<=" << args.f_max << " ell<=" << args.ell_max
              << " -> " << out.string() << "\n";
    if (!args.tsv.empty()) {
      PiTable table = PiTable::load(out);
      auto tsv = open_out(args.tsv);
      table.export_tsv(tsv);
      std::cout << "exported " << args.tsv.string() << "\n";
    }
  }
  return 0;
}

int cmd_score(const ScoreArgs& args) {
  if (args.span < 1) throw UsageError("--span is required and must be >= 1");
  if (args.format != "tsv" && args.format != "jsonl")
    throw UsageError("--format must be tsv or jsonl");
  const bool have_pair = args.pair.has_value();
  const bool have_dataset = !args.dataset.empty();
  if (have_pair == have_dataset)
    throw UsageError("give exactly one of --pair or --dataset");

  CorpusIndex index = CorpusIndex::load(args.index_file);
  WordPairDataset dataset;
  if (have_dataset) {
    dataset = load_dataset(args.dataset);
  } else {
    dataset.name = "pair";
    dataset.entries.push_back({args.pair->first, args.pair->second, 0.0});
  }

  PiCache cache(args.table, args.mode, args.limits);
  const PiSource& pi = cache.for_span(args.span);
  PairBatch batch = compute_pair_batch(index, dataset, args.span, args.jobs);

  std::vector<ScoreRecord> records(batch.pairs.size());
  parallel_for(batch.pairs.size(), args.jobs, [&](size_t i) {
    ScoreRecord& r = records[i];
    r.pair = batch.pairs[i];
    r.flag = flag_code(batch.reasons[i]);
    if (r.flag != "ok") return;
    r.K = batch.stats[i].size();
    if (args.classify_types) {
      r.cls = classify_from_stats(batch.stats[i], pi, args.types);
    } else {
      r.single =
          csr_from_stats(batch.stats[i], {args.epsilon, args.delta, args.span}, pi);
    }
    for (MeasureId m : args.measures)
      r.measures.push_back(score(m, batch.inputs[i], args.measure_options));
  });

  std::ostringstream body;
  if (args.format == "tsv") write_score_tsv(body, args, records);
  else write_score_jsonl(body, args, records);
  if (args.out.empty()) {
    std::cout << body.str();
  } else {
    auto out = open_out(args.out);
    out << body.str();
  }

  if (!args.stats_tsv.empty()) {
    auto out = open_out(args.stats_tsv);
    out << "word1\tword2\tdoc\tell\tf\tf_hat\n";
    for (size_t i = 0; i < batch.pairs.size(); ++i)
      for (const auto& s : batch.stats[i])
        out << batch.pairs[i].x << '\t' << batch.pairs[i].y << '\t' << index.doc(s.doc).id
            << '\t' << s.length << '\t' << s.f << '\t' << s.f_hat << '\n';
  }
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
  if (args.out_dir.empty()) throw UsageError("--out-dir is required");
  CorpusIndex index = CorpusIndex::load(args.index_file);
  WordPairDataset dataset = load_dataset(args.dataset);
  PiCache cache(args.table, args.mode, args.limits);
  std::cerr << "evaluating " << dataset.entries.size() << " pairs over "
            << args.settings.spans.size() << " span thresholds...\n";
  EvaluationRun run = run_evaluation(index, dataset, args.settings,
                                     [&](uint32_t span) -> const PiSource& {
                                       return cache.for_span(span);
                                     });
  std::filesystem::create_directories(args.out_dir);
  auto to_file = [&](const char* name, auto writer) {
    auto out = open_out(args.out_dir / name);
    writer(out, run);
  };
  to_file("evaluation.md", write_markdown);
  to_file("effectiveness.tsv", write_effectiveness_tsv);
  to_file("effectiveness.jsonl", write_effectiveness_jsonl);
  to_file("best_params.tsv", write_scans_tsv);
  to_file("best_params.jsonl", write_scans_jsonl);
  to_file("human.tsv", write_human_tsv);
  to_file("human.jsonl", write_human_jsonl);
  to_file("top_k.tsv", write_topk_tsv);
  to_file("top_k.jsonl", write_topk_jsonl);
  to_file("rankings.tsv", write_rankings_tsv);
  to_file("excluded.tsv", write_excluded_tsv);
  std::cout << "evaluation written to " << args.out_dir.string() << " ("
            << run.dataset_pairs << " pairs, " << run.excluded.size() << " excluded)\n";
  return 0;
}

}  // namespace lexsig
