#include "lexsig/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lexsig/error.hpp"

namespace lexsig {

namespace {

// Zero-frequency cells contribute 0 (the 0 log 0 convention); an expected
// probability of 0 with a zero observation likewise.
double llr_term(double p_joint, double p_a, double p_b) {
  if (p_joint <= 0.0) return 0.0;
  return p_joint * std::log(p_joint / (p_a * p_b));
}

double chi_term(double p_joint, double p_a, double p_b) {
  double expected = p_a * p_b;
  if (expected <= 0.0) return 0.0;
  double d = p_joint - expected;
  return d * d / expected;
}

void validate(const MeasureInputs& in, MeasureId id) {
  if (in.total_tokens == 0) throw DataError("measure inputs: corpus has no tokens");
  if (in.f_x == 0 || in.f_y == 0) throw DataError("measure inputs: unigram frequency is zero");
  if (in.f_hat > in.f_x || in.f_hat > in.f_y)
    throw DataError("measure inputs: f_hat exceeds a unigram frequency");
  if (in.f_x + in.f_y - in.f_hat > in.total_tokens)
    throw DataError("measure inputs: frequencies exceed corpus size");
  if (in.spans.size() != in.f_hat)
    throw DataError("measure inputs: span list does not match f_hat");
  if (id == MeasureId::csa && in.joint_docs == 0)
    throw DataError("measure inputs: joint document count is zero");
}

}  // namespace

const MeasureInfo& measure_info(MeasureId id) {
  static const MeasureInfo table[] = {
      {"csa", true, false, true},        {"llr", true, true, true},
      {"pmi", true, false, true},        {"sci", false, false, true},
      {"cwcd", false, false, true},      {"chi_square", true, true, true},
      {"t_test", true, false, true},     {"dice", true, false, true},
      {"ochiai", true, false, true},     {"jaccard", true, false, true},
  };
  return table[static_cast<size_t>(id)];
}

std::optional<MeasureId> measure_from_name(std::string_view name) {
  for (MeasureId id : all_measures)
    if (name == measure_info(id).name) return id;
  return std::nullopt;
}

MeasureInputs make_measure_inputs(const CorpusIndex& index, const BigramPair& pair,
                                  std::span<const DocPairStats> stats) {
  MeasureInputs in;
  in.f_x = index.unigram_frequency(pair.x);
  in.f_y = index.unigram_frequency(pair.y);
  in.total_tokens = index.total_tokens();
  in.joint_docs = stats.size();
  for (const auto& s : stats) {
    in.f_hat += static_cast<uint64_t>(s.f_hat);
    in.spans.insert(in.spans.end(), s.close_spans.begin(), s.close_spans.end());
  }
  return in;
}

MeasureInputs swapped(const MeasureInputs& in) {
  MeasureInputs out = in;
  std::swap(out.f_x, out.f_y);
  return out;
}

std::optional<double> score(MeasureId id, const MeasureInputs& in, const MeasureOptions& opt) {
  validate(in, id);
  const double n = static_cast<double>(in.total_tokens);
  const double fx = static_cast<double>(in.f_x);
  const double fy = static_cast<double>(in.f_y);
  const double fhat = static_cast<double>(in.f_hat);
  const double px = fx / n;
  const double py = fy / n;
  const double pxy = fhat / n;

  auto undefined = [&]() -> std::optional<double> {
    if (opt.neg_inf_for_undefined) return -std::numeric_limits<double>::infinity();
    return std::nullopt;
  };

  switch (id) {
    case MeasureId::csa:
      return fhat / std::sqrt(static_cast<double>(in.joint_docs));
    case MeasureId::llr: {
      double v = llr_term(pxy, px, py) + llr_term(px - pxy, px, 1.0 - py) +
                 llr_term(py - pxy, 1.0 - px, py) +
                 llr_term(1.0 - px - py + pxy, 1.0 - px, 1.0 - py);
      return opt.llr_scaled ? 2.0 * n * v : v;
    }
    case MeasureId::pmi:
      if (in.f_hat == 0) return undefined();
      return std::log(pxy / (px * py));
    case MeasureId::sci:
      if (in.f_hat == 0) return undefined();
      return pxy / (px * std::sqrt(py));
    case MeasureId::cwcd: {
      if (in.f_hat == 0) return undefined();  // harmonic span mean needs occurrences
      double inv_sum = 0;
      for (uint32_t s : in.spans) {
        if (s == 0) throw DataError("measure inputs: zero span");
        inv_sum += 1.0 / static_cast<double>(s);
      }
      double m = fhat / inv_sum;
      return (fhat / px) * ((1.0 / std::max(px, py)) / m);
    }
    case MeasureId::chi_square:
      return chi_term(pxy, px, py) + chi_term(px - pxy, px, 1.0 - py) +
             chi_term(py - pxy, 1.0 - px, py) +
             chi_term(1.0 - px - py + pxy, 1.0 - px, 1.0 - py);
    case MeasureId::t_test: {
      if (in.f_hat == 0) return undefined();
      double denom = std::sqrt(fhat * (1.0 - fhat / n));
      if (denom == 0.0) return undefined();
      return (fhat - n * px * py) / denom;
    }
    case MeasureId::dice:
      return 2.0 * fhat / (fx + fy);
    case MeasureId::ochiai:
      return fhat / std::sqrt(fx * fy);
    case MeasureId::jaccard:
      return fhat / (fx + fy - fhat);
  }
  throw UsageError("unknown measure");
}

std::vector<RankedScore> rank(MeasureId id,
                              std::span<const std::pair<BigramPair, MeasureInputs>> items,
                              const MeasureOptions& opt) {
  std::vector<RankedScore> out;
  out.reserve(items.size());
  for (const auto& [pair, in] : items) out.push_back({pair, score(id, in, opt), 0});
  std::sort(out.begin(), out.end(), [](const RankedScore& a, const RankedScore& b) {
    if (a.value.has_value() != b.value.has_value()) return a.value.has_value();
    if (a.value && b.value && *a.value != *b.value) return *a.value > *b.value;
    return a.pair < b.pair;
  });
  for (size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

std::pair<std::optional<double>, std::optional<double>> property_check(
    MeasureId id, const MeasureInputs& in, const PropertyTransform& transform,
    const MeasureOptions& opt) {
  if (transform.replicate < 1) throw UsageError("replication factor must be >= 1");
  MeasureInputs changed = in;
  const unsigned m = transform.replicate;
  changed.f_x *= m;
  changed.f_y *= m;
  changed.f_hat *= m;
  changed.total_tokens *= m;
  changed.joint_docs *= m;
  changed.spans.clear();
  for (unsigned r = 0; r < m; ++r)
    changed.spans.insert(changed.spans.end(), in.spans.begin(), in.spans.end());
  changed.total_tokens += transform.null_add;
  return {score(id, in, opt), score(id, changed, opt)};
}

}  // namespace lexsig
