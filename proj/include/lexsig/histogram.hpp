#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace lexsig {

struct HistLimits {
  int f_max = 64;
  uint32_t ell_max = 1500;
};

// Embedding counts for f disjoint ordered intervals in a document of ell
// positions: counts[k] = number of placements with exactly k intervals of
// span < x_threshold. Sum over k is C(ell, 2f).
struct SpanHistogram {
  int f = 0;
  uint32_t ell = 0;
  uint32_t x_threshold = 1;
  std::vector<mpz_class> counts;  // index 0..f
  mpz_class total() const;
};

// Memoized exact computation.
SpanHistogram compute_hist(int f, uint32_t ell, uint32_t x_threshold,
                           const HistLimits& limits = {});
// Direct recursive enumeration, exponential; refuses f > 3 or ell > 12.
SpanHistogram reference_hist(int f, uint32_t ell, uint32_t x_threshold);

// Null-model probability source for one span threshold.
class PiSource {
public:
  virtual ~PiSource() = default;
  virtual uint32_t x_threshold() const = 0;
  // P[at least f_hat of the f intervals have span < x_threshold], under a
  // uniform random placement in ell positions. Non-increasing in f_hat,
  // pi(0, f, ell) = 1.
  virtual double pi(int f_hat, int f, uint32_t ell) const = 0;
  // Least f_hat with pi(f_hat, f, ell) < epsilon; nullopt when no frequency
  // is rare enough (e.g. x_threshold >= ell).
  std::optional<int> g_epsilon(int f, uint32_t ell, double epsilon) const;
};

enum class HistMode { exact, floating };

// Lazily grown histogram table; thread-safe, values independent of query order.
class HistEngine : public PiSource {
public:
  explicit HistEngine(uint32_t x_threshold, HistMode mode = HistMode::exact,
                      HistLimits limits = {});
  ~HistEngine() override;
  HistEngine(HistEngine&&) noexcept;
  HistEngine& operator=(HistEngine&&) noexcept;

  uint32_t x_threshold() const override;
  double pi(int f_hat, int f, uint32_t ell) const override;
  // exact mode only
  std::vector<mpz_class> hist(int f, uint32_t ell) const;

  HistMode mode() const;
  const HistLimits& limits() const;
  // Accumulated floating-point error bound (relative); 0 in exact mode.
  double error_bound() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Published probability table: strict lookups, no fallback computation.
class PiTable : public PiSource {
public:
  static PiTable load(const std::filesystem::path& file);

  uint32_t x_threshold() const override;
  double pi(int f_hat, int f, uint32_t ell) const override;

  int f_max() const noexcept { return f_max_; }
  uint32_t ell_max() const noexcept { return ell_max_; }
  HistMode mode() const noexcept { return mode_; }
  double error_bound() const noexcept { return err_bound_; }

  void export_tsv(std::ostream& out) const;

private:
  PiTable() = default;
  size_t cell_offset(int f, uint32_t ell) const;

  uint32_t x_ = 1;
  int f_max_ = 0;
  uint32_t ell_max_ = 0;
  HistMode mode_ = HistMode::exact;
  double err_bound_ = 0;
  std::vector<size_t> f_base_;    // block offset per f
  std::vector<double> values_;
};

// Writes pi for f in 1..f_max, ell in 2f..ell_max, f_hat in 0..f.
void publish_table(const HistEngine& engine, int f_max, uint32_t ell_max,
                   const std::filesystem::path& out);

}  // namespace lexsig
