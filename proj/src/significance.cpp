#include "lexsig/significance.hpp"

#include <cmath>

#include "lexsig/error.hpp"

namespace lexsig {

namespace {

void validate_probability(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw UsageError(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
}

}  // namespace

int document_support(const DocPairStats& stats, double epsilon, const PiSource& pi) {
  auto g = pi.g_epsilon(stats.f, stats.length, epsilon);
  if (!g) return 0;
  return stats.f_hat >= *g ? 1 : 0;
}

double expected_Z(std::span<const DocPairStats> stats, double epsilon, const PiSource& pi) {
  double sum = 0;
  for (const auto& s : stats) {
    auto g = pi.g_epsilon(s.f, s.length, epsilon);
    if (g) sum += pi.pi(*g, s.f, s.length);
  }
  return sum;
}

CsrResult csr_decision(size_t K, int Z, double ez, double delta) {
  if (K == 0) throw DataError("undefined test: no documents contain both words");
  validate_probability(delta, "delta");
  if (Z < 0 || static_cast<size_t>(Z) > K)
    throw DataError("Z must lie in [0, K], got Z=" + std::to_string(Z) +
                    " K=" + std::to_string(K));
  if (!(ez >= 0.0) || ez > static_cast<double>(K))
    throw DataError("expected Z must lie in [0, K], got " + std::to_string(ez));
  CsrResult r;
  r.K = K;
  r.Z = Z;
  r.ez = ez;
  r.t = std::sqrt(-std::log(delta) / (2.0 * static_cast<double>(K)));
  r.threshold = ez + static_cast<double>(K) * r.t;
  r.csr = static_cast<double>(Z) / r.threshold;
  r.significant = static_cast<double>(Z) >= r.threshold;
  return r;
}

CsrResult csr_from_stats(std::span<const DocPairStats> stats, const SignificanceParams& params,
                         const PiSource& pi) {
  validate_probability(params.epsilon, "epsilon");
  if (params.x_threshold != pi.x_threshold())
    throw UsageError("span threshold mismatch: params x=" + std::to_string(params.x_threshold) +
                     " but probability source has x=" + std::to_string(pi.x_threshold()));
  int z = 0;
  for (const auto& s : stats) z += document_support(s, params.epsilon, pi);
  return csr_decision(stats.size(), z, expected_Z(stats, params.epsilon, pi), params.delta);
}

CsrResult csr(const CorpusIndex& index, const BigramPair& pair, const SignificanceParams& params,
              const PiSource& pi) {
  auto stats = pair_stats(index, pair, params.x_threshold);
  return csr_from_stats(stats, params, pi);
}

const char* to_string(CoocType type) {
  switch (type) {
    case CoocType::A: return "A";
    case CoocType::B: return "B";
    case CoocType::C: return "C";
    case CoocType::D: return "D";
  }
  return "?";
}

std::array<TypeSettings, 4> default_type_settings() {
  return {{{0.1, 0.1}, {0.4, 0.1}, {0.1, 0.4}, {0.4, 0.4}}};
}

std::vector<CoocType> exclusive_types(const std::array<bool, 4>& significant) {
  std::vector<CoocType> out;
  if (significant[0]) {
    out.push_back(CoocType::A);
    return out;
  }
  if (significant[1]) out.push_back(CoocType::B);
  if (significant[2]) out.push_back(CoocType::C);
  if (!out.empty()) return out;
  if (significant[3]) out.push_back(CoocType::D);
  return out;
}

std::string Classification::exclusive_label() const {
  if (exclusive.empty()) return "-";
  std::string label;
  for (size_t i = 0; i < exclusive.size(); ++i) {
    if (i) label += ",";
    label += to_string(exclusive[i]);
  }
  return label;
}

Classification classify_from_stats(std::span<const DocPairStats> stats, const PiSource& pi,
                                   const std::array<TypeSettings, 4>& types) {
  Classification out;
  for (size_t i = 0; i < 4; ++i) {
    SignificanceParams params{types[i].epsilon, types[i].delta, pi.x_threshold()};
    out.by_type[i] = csr_from_stats(stats, params, pi);
    out.significant[i] = out.by_type[i].significant;
  }
  out.exclusive = exclusive_types(out.significant);
  return out;
}

Classification classify(const CorpusIndex& index, const BigramPair& pair, uint32_t x_threshold,
                        const PiSource& pi, const std::array<TypeSettings, 4>& types) {
  auto stats = pair_stats(index, pair, x_threshold);
  if (x_threshold != pi.x_threshold())
    throw UsageError("span threshold mismatch: requested x=" + std::to_string(x_threshold) +
                     " but probability source has x=" + std::to_string(pi.x_threshold()));
  return classify_from_stats(stats, pi, types);
}

}  // namespace lexsig
