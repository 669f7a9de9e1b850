#include "lexsig/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "lexsig/error.hpp"
#include "lexsig/parallel.hpp"

namespace lexsig {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string json_num(double v) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  return fmt_num(v);
}

std::string json_opt(const std::optional<double>& v) { return v ? json_num(*v) : "null"; }

std::string tsv_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : "-"; }

std::string type_label(double epsilon, double delta, const std::array<TypeSettings, 4>& types) {
  for (size_t i = 0; i < 4; ++i)
    if (types[i].epsilon == epsilon && types[i].delta == delta)
      return to_string(static_cast<CoocType>(i));
  return "-";
}

std::string effective_letters(const std::array<bool, 4>& effective) {
  std::string out;
  for (size_t i = 0; i < 4; ++i) {
    if (!effective[i]) continue;
    if (!out.empty()) out += ",";
    out += to_string(static_cast<CoocType>(i));
  }
  return out.empty() ? "-" : out;
}

std::vector<RankedScore> rank_values(const std::vector<BigramPair>& pairs,
                                     std::span<const double> values) {
  std::vector<RankedScore> out;
  out.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) out.push_back({pairs[i], values[i], 0});
  std::sort(out.begin(), out.end(), [](const RankedScore& a, const RankedScore& b) {
    if (*a.value != *b.value) return *a.value > *b.value;
    return a.pair < b.pair;
  });
  for (size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

void validate_settings(const EvalSettings& s) {
  if (s.spans.empty()) throw UsageError("no span thresholds given");
  for (uint32_t x : s.spans)
    if (x < 1) throw UsageError("span threshold must be >= 1");
  if (s.measures.empty()) throw UsageError("no measures given");
  auto check_grid = [](std::span<const double> grid, const char* name) {
    if (grid.empty()) throw UsageError(std::string(name) + " grid is empty");
    for (double v : grid)
      if (!(v > 0.0 && v < 1.0))
        throw UsageError(std::string(name) + " grid values must lie in (0, 1)");
  };
  check_grid(s.epsilon_grid, "epsilon");
  check_grid(s.delta_grid, "delta");
  if (!(s.effectiveness_threshold > 0.0 && s.effectiveness_threshold <= 1.0))
    throw UsageError("effectiveness threshold must lie in (0, 1]");
  if (s.top_k < 1) throw UsageError("top_k must be >= 1");
}

}  // namespace

WordPairDataset load_dataset(const std::filesystem::path& file, const DatasetOptions& opt) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot read dataset file: " + file.string());
  WordPairDataset out;
  out.name = file.stem().string();
  std::string line;
  size_t lineno = 0;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string w1, w2, score_str, extra;
    if (!(fields >> w1 >> w2 >> score_str) || (fields >> extra))
      throw DataError(file.string() + ":" + std::to_string(lineno) +
                      ": expected 'word1 word2 score'");
    double score;
    try {
      size_t used = 0;
      score = std::stod(score_str, &used);
      if (used != score_str.size()) throw std::invalid_argument(score_str);
    } catch (const std::exception&) {
      throw DataError(file.string() + ":" + std::to_string(lineno) +
                      ": score is not a number: " + score_str);
    }
    if (!seen.insert({w1, w2}).second) {
      if (opt.keep_first_duplicate) continue;
      throw DataError(file.string() + ":" + std::to_string(lineno) + ": duplicate pair " + w1 +
                      " " + w2);
    }
    out.entries.push_back({std::move(w1), std::move(w2), score});
  }
  if (out.entries.empty()) throw DataError("dataset has no pairs: " + file.string());
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the average of ranks i+1..j+1
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DataError("rank correlation needs aligned score lists (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  const size_t n = a.size();
  if (n < 2) throw DataError("rank correlation needs at least two items");
  for (size_t i = 0; i < n; ++i)
    if (std::isnan(a[i]) || std::isnan(b[i])) throw DataError("rank correlation input is NaN");
  std::vector<double> ra = average_ranks(a);
  std::vector<double> rb = average_ranks(b);
  // average ranks always sum to n(n+1)/2, so the mean is exact
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < n; ++i) {
    double da = ra[i] - mean;
    double db = rb[i] - mean;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return cov / std::sqrt(va * vb);
}

PairBatch compute_pair_batch(const CorpusIndex& index, const WordPairDataset& dataset,
                             uint32_t span, unsigned jobs) {
  if (span < 1) throw UsageError("span threshold must be >= 1");
  PairBatch batch;
  batch.span = span;
  const size_t n = dataset.entries.size();
  batch.pairs.resize(n);
  batch.human.resize(n);
  batch.stats.resize(n);
  batch.inputs.resize(n);
  batch.reasons.resize(n);
  auto& reasons = batch.reasons;

  const bool fold = index.config().case_fold;
  parallel_for(n, jobs, [&](size_t i) {
    const auto& e = dataset.entries[i];
    batch.human[i] = e.score;
    auto t1 = tokenize(e.w1, fold);
    auto t2 = tokenize(e.w2, fold);
    if (t1.size() != 1 || t2.size() != 1) {
      batch.pairs[i] = {e.w1, e.w2};
      reasons[i] = "not a single token";
      return;
    }
    BigramPair pair{t1[0], t2[0]};
    batch.pairs[i] = pair;
    if (pair.x == pair.y) {
      reasons[i] = "identical words";
      return;
    }
    if (!index.contains(pair.x) || !index.contains(pair.y)) {
      reasons[i] = "word absent from corpus";
      return;
    }
    auto stats = pair_stats(index, pair, span);
    if (stats.empty()) {
      reasons[i] = "no joint documents";
      return;
    }
    batch.inputs[i] = make_measure_inputs(index, pair, stats);
    batch.stats[i] = std::move(stats);
  });

  for (size_t i = 0; i < n; ++i) {
    if (reasons[i].empty()) batch.included.push_back(i);
    else batch.excluded.push_back({batch.pairs[i], reasons[i]});
  }
  return batch;
}

std::vector<double> measure_scores(const PairBatch& batch, MeasureId id,
                                   const MeasureOptions& opt) {
  std::vector<double> out;
  out.reserve(batch.included.size());
  for (size_t i : batch.included) {
    auto v = score(id, batch.inputs[i], opt);
    out.push_back(v ? *v : kNegInf);
  }
  return out;
}

std::vector<double> csr_scores(const PairBatch& batch, double epsilon, double delta,
                               const PiSource& pi) {
  SignificanceParams params{epsilon, delta, batch.span};
  std::vector<double> out;
  out.reserve(batch.included.size());
  for (size_t i : batch.included)
    out.push_back(csr_from_stats(batch.stats[i], params, pi).csr);
  return out;
}

GridBest best_parameter_scan(const PairBatch& batch, std::span<const double> ranking_scores,
                             std::span<const double> epsilon_grid,
                             std::span<const double> delta_grid, const PiSource& pi) {
  if (epsilon_grid.empty() || delta_grid.empty()) throw UsageError("parameter grid is empty");
  GridBest best{epsilon_grid[0], delta_grid[0], std::numeric_limits<double>::quiet_NaN()};
  bool have = false;  // best.rho holds a real correlation
  for (double eps : epsilon_grid) {
    for (double delta : delta_grid) {
      double rho = spearman(ranking_scores, csr_scores(batch, eps, delta, pi));
      if (!std::isnan(rho) && (!have || rho > best.rho)) {
        best = {eps, delta, rho};
        have = true;
      }
    }
  }
  return best;
}

HumanCorrelation human_correlation(std::span<const double> human,
                                   std::span<const std::optional<double>> scores) {
  if (human.size() != scores.size())
    throw DataError("human correlation needs aligned lists");
  HumanCorrelation out;
  out.total = human.size();
  std::vector<double> h, s;
  for (size_t i = 0; i < human.size(); ++i) {
    if (!scores[i]) continue;
    h.push_back(human[i]);
    s.push_back(*scores[i]);
  }
  out.used = h.size();
  if (out.used == 0) throw DataError("no overlapping pairs between dataset and scores");
  if (out.used < 2) throw DataError("fewer than two overlapping pairs; correlation undefined");
  out.rho = spearman(h, s);
  return out;
}

TopKReport top_k_report(std::span<const std::pair<std::string, std::vector<RankedScore>>> lists,
                        size_t k) {
  if (k < 1) throw UsageError("top_k must be >= 1");
  if (lists.empty()) throw UsageError("no ranked lists given");
  TopKReport report;
  report.k = k;
  std::vector<std::map<BigramPair, size_t>> position(lists.size());
  for (size_t l = 0; l < lists.size(); ++l) {
    report.labels.push_back(lists[l].first);
    for (const auto& r : lists[l].second) position[l][r.pair] = r.rank;
  }
  for (size_t l = 0; l < lists.size(); ++l) {
    TopKList out;
    out.label = lists[l].first;
    const auto& ranking = lists[l].second;
    if (ranking.size() < k) report.truncated = true;
    for (size_t i = 0; i < std::min(k, ranking.size()); ++i) {
      TopKRow row;
      row.rank = ranking[i].rank;
      row.pair = ranking[i].pair;
      row.score = ranking[i].value;
      for (size_t m = 0; m < lists.size(); ++m) {
        auto it = position[m].find(row.pair);
        row.cross.push_back(it == position[m].end() ? std::nullopt
                                                    : std::optional<size_t>(it->second));
      }
      out.rows.push_back(std::move(row));
    }
    report.lists.push_back(std::move(out));
  }
  return report;
}

EvaluationRun run_evaluation(const CorpusIndex& index, const WordPairDataset& dataset,
                             const EvalSettings& settings, const PiProvider& pi_for_span) {
  validate_settings(settings);
  EvaluationRun run;
  run.dataset_name = dataset.name;
  run.dataset_pairs = dataset.entries.size();
  run.settings = settings;

  for (size_t si = 0; si < settings.spans.size(); ++si) {
    const uint32_t span = settings.spans[si];
    PairBatch batch = compute_pair_batch(index, dataset, span, settings.jobs);
    if (si == 0) run.excluded = batch.excluded;
    if (batch.included.size() < 2)
      throw DataError("fewer than two dataset pairs usable with the corpus");
    const PiSource& pi = pi_for_span(span);
    if (pi.x_threshold() != span)
      throw UsageError("probability source has x=" + std::to_string(pi.x_threshold()) +
                       " but span " + std::to_string(span) + " was requested");

    std::array<std::vector<double>, 4> type_scores;
    for (size_t t = 0; t < 4; ++t)
      type_scores[t] =
          csr_scores(batch, settings.types[t].epsilon, settings.types[t].delta, pi);

    std::vector<std::vector<double>> grid;  // epsilon-major, delta-minor
    grid.reserve(settings.epsilon_grid.size() * settings.delta_grid.size());
    for (double eps : settings.epsilon_grid)
      for (double delta : settings.delta_grid)
        grid.push_back(csr_scores(batch, eps, delta, pi));

    std::vector<std::pair<std::string, std::vector<RankedScore>>> lists;
    std::vector<double> human_included;
    for (size_t i : batch.included) human_included.push_back(batch.human[i]);

    for (MeasureId m : settings.measures) {
      std::vector<double> ms = measure_scores(batch, m, settings.measure_options);

      EffectivenessCell cell;
      cell.measure = m;
      cell.span = span;
      for (size_t t = 0; t < 4; ++t) {
        cell.rho[t] = spearman(ms, type_scores[t]);
        cell.effective[t] =
            !std::isnan(cell.rho[t]) && cell.rho[t] > settings.effectiveness_threshold;
      }
      run.effectiveness.push_back(cell);

      ScanRow scan;
      scan.measure = m;
      scan.span = span;
      scan.best = {settings.epsilon_grid[0], settings.delta_grid[0],
                   std::numeric_limits<double>::quiet_NaN()};
      size_t g = 0;
      bool have = false;
      for (double eps : settings.epsilon_grid) {
        for (double delta : settings.delta_grid) {
          double rho = spearman(ms, grid[g++]);
          if (!std::isnan(rho) && (!have || rho > scan.best.rho)) {
            scan.best = {eps, delta, rho};
            have = true;
          }
        }
      }
      scan.type_label = type_label(scan.best.epsilon, scan.best.delta, settings.types);
      run.scans.push_back(scan);

      std::vector<std::pair<BigramPair, MeasureInputs>> items;
      for (size_t i : batch.included) items.emplace_back(batch.pairs[i], batch.inputs[i]);
      lists.emplace_back(measure_info(m).name, rank(m, items, settings.measure_options));

      std::vector<std::optional<double>> opt_scores;
      for (size_t i : batch.included)
        opt_scores.push_back(score(m, batch.inputs[i], settings.measure_options));
      HumanRow hr;
      hr.label = measure_info(m).name;
      hr.span = span;
      hr.corr = human_correlation(human_included, opt_scores);
      run.human.push_back(hr);
    }

    {
      std::vector<BigramPair> included_pairs;
      for (size_t i : batch.included) included_pairs.push_back(batch.pairs[i]);
      lists.emplace_back("csr_A", rank_values(included_pairs, type_scores[0]));
      std::vector<std::optional<double>> opt_scores;
      for (double v : type_scores[0]) opt_scores.push_back(v);
      HumanRow hr;
      hr.label = "csr_A";
      hr.span = span;
      hr.corr = human_correlation(human_included, opt_scores);
      run.human.push_back(hr);
    }

    for (const auto& [label, ranking] : lists)
      for (const auto& r : ranking)
        run.rankings.push_back({span, label, r.pair, r.value, r.rank});

    TopKReport tk = top_k_report(lists, std::min(settings.top_k, batch.included.size()));
    tk.span = span;
    run.topk.push_back(std::move(tk));
  }
  return run;
}

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_effectiveness_tsv(std::ostream& out, const EvaluationRun& run) {
  out << "measure\tspan\trho_A\trho_B\trho_C\trho_D\teffective\n";
  for (const auto& c : run.effectiveness) {
    out << measure_info(c.measure).name << '\t' << c.span;
    for (double r : c.rho) out << '\t' << fmt_num(r);
    out << '\t' << effective_letters(c.effective) << '\n';
  }
}

void write_effectiveness_jsonl(std::ostream& out, const EvaluationRun& run) {
  for (const auto& c : run.effectiveness) {
    out << "{\"measure\":\"" << measure_info(c.measure).name << "\",\"span\":" << c.span
        << ",\"rho\":{";
    for (size_t t = 0; t < 4; ++t) {
      if (t) out << ',';
      out << '"' << to_string(static_cast<CoocType>(t)) << "\":" << json_num(c.rho[t]);
    }
    out << "},\"effective\":[";
    bool firstLetter = true;
    for (size_t t = 0; t < 4; ++t) {
      if (!c.effective[t]) continue;
      if (!firstLetter) out << ',';
      out << '"' << to_string(static_cast<CoocType>(t)) << '"';
      firstLetter = false;
    }
    out << "]}\n";
  }
}

void write_scans_tsv(std::ostream& out, const EvaluationRun& run) {
  out << "measure\tspan\tepsilon\tdelta\trho\ttype\n";
  for (const auto& s : run.scans)
    out << measure_info(s.measure).name << '\t' << s.span << '\t' << fmt_num(s.best.epsilon)
        << '\t' << fmt_num(s.best.delta) << '\t' << fmt_num(s.best.rho) << '\t' << s.type_label
        << '\n';
}

void write_scans_jsonl(std::ostream& out, const EvaluationRun& run) {
  for (const auto& s : run.scans)
    out << "{\"measure\":\"" << measure_info(s.measure).name << "\",\"span\":" << s.span
        << ",\"epsilon\":" << json_num(s.best.epsilon) << ",\"delta\":" << json_num(s.best.delta)
        << ",\"rho\":" << json_num(s.best.rho) << ",\"type\":\"" << s.type_label << "\"}\n";
}

void write_human_tsv(std::ostream& out, const EvaluationRun& run) {
  out << "list\tspan\trho\tused\ttotal\n";
  for (const auto& h : run.human)
    out << h.label << '\t' << h.span << '\t' << fmt_num(h.corr.rho) << '\t' << h.corr.used
        << '\t' << h.corr.total << '\n';
}

void write_human_jsonl(std::ostream& out, const EvaluationRun& run) {
  for (const auto& h : run.human)
    out << "{\"list\":\"" << json_escape(h.label) << "\",\"span\":" << h.span
        << ",\"rho\":" << json_num(h.corr.rho) << ",\"used\":" << h.corr.used
        << ",\"total\":" << h.corr.total << "}\n";
}

void write_topk_tsv(std::ostream& out, const EvaluationRun& run) {
  out << "span\tlist\trank\tword1\tword2\tscore";
  if (!run.topk.empty())
    for (const auto& label : run.topk.front().labels) out << "\trank_in:" << label;
  out << '\n';
  for (const auto& report : run.topk) {
    for (const auto& list : report.lists) {
      for (const auto& row : list.rows) {
        out << report.span << '\t' << list.label << '\t' << row.rank << '\t' << row.pair.x
            << '\t' << row.pair.y << '\t' << tsv_opt(row.score);
        for (const auto& cr : row.cross) {
          out << '\t';
          if (cr) out << *cr;
          else out << '-';
        }
        out << '\n';
      }
    }
  }
}

void write_topk_jsonl(std::ostream& out, const EvaluationRun& run) {
  for (const auto& report : run.topk) {
    for (const auto& list : report.lists) {
      for (const auto& row : list.rows) {
        out << "{\"span\":" << report.span << ",\"list\":\"" << json_escape(list.label)
            << "\",\"rank\":" << row.rank << ",\"word1\":\"" << json_escape(row.pair.x)
            << "\",\"word2\":\"" << json_escape(row.pair.y)
            << "\",\"score\":" << json_opt(row.score) << ",\"cross\":{";
        for (size_t m = 0; m < report.labels.size(); ++m) {
          if (m) out << ',';
          out << '"' << json_escape(report.labels[m]) << "\":";
          if (row.cross[m]) out << *row.cross[m];
          else out << "null";
        }
        out << "}}\n";
      }
    }
  }
}

void write_rankings_tsv(std::ostream& out, const EvaluationRun& run) {
  out << "span\tlist\tword1\tword2\tscore\trank\n";
  for (const auto& r : run.rankings)
    out << r.span << '\t' << r.label << '\t' << r.pair.x << '\t' << r.pair.y << '\t'
        << tsv_opt(r.value) << '\t' << r.rank << '\n';
}

void write_excluded_tsv(std::ostream& out, const EvaluationRun& run) {
  out << "word1\tword2\treason\n";
  for (const auto& e : run.excluded)
    out << e.pair.x << '\t' << e.pair.y << '\t' << e.reason << '\n';
}

void write_markdown(std::ostream& out, const EvaluationRun& run) {
  out << "# Evaluation: " << run.dataset_name << "\n\n";
  out << run.dataset_pairs << " dataset pairs, " << run.excluded.size()
      << " excluded; effectiveness threshold rho > " << fmt_num(run.settings.effectiveness_threshold)
      << ".\n\n";

  out << "## Effective settings per measure\n\n";
  out << "Letters mark significance-test settings (A-D) whose ranking the measure"
         " reproduces above the threshold.\n\n";
  out << "| Measure |";
  for (uint32_t span : run.settings.spans) out << " span " << span << " |";
  out << "\n|---|";
  for (size_t i = 0; i < run.settings.spans.size(); ++i) out << "---|";
  out << "\n";
  for (MeasureId m : run.settings.measures) {
    out << "| " << measure_info(m).name << " |";
    for (uint32_t span : run.settings.spans) {
      auto it = std::find_if(run.effectiveness.begin(), run.effectiveness.end(),
                             [&](const EffectivenessCell& c) {
                               return c.measure == m && c.span == span;
                             });
      out << ' ' << (it != run.effectiveness.end() ? effective_letters(it->effective) : "-")
          << " |";
    }
    out << "\n";
  }

  out << "\n## Best grid settings per measure\n\n";
  out << "| Measure | Span | epsilon | delta | rho | Type |\n|---|---|---|---|---|---|\n";
  for (const auto& s : run.scans)
    out << "| " << measure_info(s.measure).name << " | " << s.span << " | "
        << fmt_num(s.best.epsilon) << " | " << fmt_num(s.best.delta) << " | "
        << fmt_num(s.best.rho) << " | " << s.type_label << " |\n";

  out << "\n## Correlation with human judgments\n\n";
  out << "| List | Span | rho | Pairs used |\n|---|---|---|---|\n";
  for (const auto& h : run.human)
    out << "| " << h.label << " | " << h.span << " | " << fmt_num(h.corr.rho) << " | "
        << h.corr.used << "/" << h.corr.total << " |\n";

  for (const auto& report : run.topk) {
    out << "\n## Top " << report.k << " pairs, span " << report.span << "\n";
    for (const auto& list : report.lists) {
      out << "\n### " << list.label << "\n\n";
      out << "| Rank | Pair | Score |";
      for (const auto& label : report.labels) out << " " << label << " |";
      out << "\n|---|---|---|";
      for (size_t i = 0; i < report.labels.size(); ++i) out << "---|";
      out << "\n";
      for (const auto& row : list.rows) {
        out << "| " << row.rank << " | " << row.pair.x << " " << row.pair.y << " | "
            << tsv_opt(row.score) << " |";
        for (const auto& cr : row.cross) {
          out << ' ';
          if (cr) out << *cr;
          else out << '-';
          out << " |";
        }
        out << "\n";
      }
    }
  }

  if (!run.excluded.empty()) {
    out << "\n## Excluded pairs\n\n";
    for (const auto& e : run.excluded)
      out << "- " << e.pair.x << " " << e.pair.y << ": " << e.reason << "\n";
  }
}

}  // namespace lexsig
