#include "lexsig/histogram.hpp"

#include <cfloat>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "lexsig/error.hpp"

namespace lexsig {

namespace {

constexpr char kTableMagic[] = "LEXSIG-PITABLE 1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_f64(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in, const std::string& file) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in.good()) throw DataError("corrupt table file " + file + ": truncated");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void check_capacity(int f, uint32_t ell, const HistLimits& limits) {
  if (f < 0) throw DataError("negative occurrence count");
  if (f > limits.f_max || ell > limits.ell_max)
    throw CapacityError("histogram capacity exceeded: f=" + std::to_string(f) +
                        " ell=" + std::to_string(ell) + " (limits f<=" +
                        std::to_string(limits.f_max) + ", ell<=" + std::to_string(limits.ell_max) +
                        "; raise --f-max/--ell-max)");
}

// Count placements of f disjoint ordered intervals i1<j1<...<if<jf in ell
// positions, by the number of intervals with span j-i < x. Level f at length
// ell splits on the first interval's end j: spans j-i with i < j map
// qualifying ends to j <= x. Prefix sums over lengths of the level below turn
// both j-ranges into two-term differences.
template <class T>
class Core {
public:
  Core(uint32_t x, HistLimits limits) : x_(x), limits_(limits) {}

  std::vector<T> row(int f, uint32_t ell) {
    check_capacity(f, ell, limits_);
    ensure(f, ell);
    return hist_[static_cast<size_t>(f)][ell];
  }

  // Sums of rows computed without materializing a copy.
  void tail_and_total(int f, uint32_t ell, int f_hat, T& tail, T& total) {
    check_capacity(f, ell, limits_);
    ensure(f, ell);
    const auto& r = hist_[static_cast<size_t>(f)][ell];
    tail = T();
    total = T();
    for (int k = 0; k <= f; ++k) {
      total += r[static_cast<size_t>(k)];
      if (k >= f_hat) tail += r[static_cast<size_t>(k)];
    }
  }

  uint64_t add_ops() const { return add_ops_; }

private:
  void ensure(int f, uint32_t ell) {
    if (static_cast<size_t>(f) >= hist_.size()) {
      hist_.resize(static_cast<size_t>(f) + 1);
      prefix_.resize(static_cast<size_t>(f) + 1);
    }
    for (int level = 0; level <= f; ++level) extend_level(level, ell);
  }

  void extend_level(int f, uint32_t ell) {
    auto& hist = hist_[static_cast<size_t>(f)];
    auto& prefix = prefix_[static_cast<size_t>(f)];
    for (uint64_t len = hist.size(); len <= ell; ++len) {
      std::vector<T> row(static_cast<size_t>(f) + 1);
      if (f == 0) {
        row[0] = T(1);
      } else {
        const auto& below = prefix_[static_cast<size_t>(f) - 1];
        const uint64_t lo = len - std::min<uint64_t>(len, x_);
        for (int k = 0; k <= f; ++k) {
          T v = len > 0 ? hist[len - 1][static_cast<size_t>(k)] : T();
          if (k >= 1 && len >= 2) {
            v += below[len - 2][static_cast<size_t>(k) - 1];
            if (lo >= 1) v -= below[lo - 1][static_cast<size_t>(k) - 1];
          }
          // a non-qualifying first interval caps the qualifying count at f-1
          if (k < f && len >= static_cast<uint64_t>(x_) + 1)
            v += below[len - x_ - 1][static_cast<size_t>(k)];
          row[static_cast<size_t>(k)] = std::move(v);
          add_ops_ += 5;
        }
      }
      std::vector<T> pre(row);
      if (len > 0)
        for (int k = 0; k <= f; ++k) pre[static_cast<size_t>(k)] += prefix[len - 1][static_cast<size_t>(k)];
      hist.push_back(std::move(row));
      prefix.push_back(std::move(pre));
    }
  }

  uint32_t x_;
  HistLimits limits_;
  std::vector<std::vector<std::vector<T>>> hist_, prefix_;  // [f][ell][k]
  uint64_t add_ops_ = 0;
};

void validate_pi_args(int f_hat, int f) {
  if (f < 0) throw DataError("negative occurrence count");
  if (f_hat < 0 || f_hat > f)
    throw DataError("f_hat out of range: " + std::to_string(f_hat) + " not in [0, " +
                    std::to_string(f) + "]");
}

}  // namespace

mpz_class SpanHistogram::total() const {
  mpz_class sum = 0;
  for (const auto& c : counts) sum += c;
  return sum;
}

std::optional<int> PiSource::g_epsilon(int f, uint32_t ell, double epsilon) const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw UsageError("epsilon must lie in (0, 1), got " + fmt17(epsilon));
  validate_pi_args(0, f);
  for (int f_hat = 0; f_hat <= f; ++f_hat)
    if (pi(f_hat, f, ell) < epsilon) return f_hat;
  return std::nullopt;
}

struct HistEngine::Impl {
  uint32_t x;
  HistMode mode;
  HistLimits limits;
  mutable std::mutex mu;
  Core<mpz_class> exact;
  Core<long double> approx;

  Impl(uint32_t x_, HistMode mode_, HistLimits limits_)
      : x(x_), mode(mode_), limits(limits_), exact(x_, limits_), approx(x_, limits_) {}
};

HistEngine::HistEngine(uint32_t x_threshold, HistMode mode, HistLimits limits) {
  if (x_threshold < 1) throw UsageError("span threshold must be >= 1");
  if (limits.f_max < 0) throw UsageError("f_max must be >= 0");
  impl_ = std::make_unique<Impl>(x_threshold, mode, limits);
}

HistEngine::~HistEngine() = default;
HistEngine::HistEngine(HistEngine&&) noexcept = default;
HistEngine& HistEngine::operator=(HistEngine&&) noexcept = default;

uint32_t HistEngine::x_threshold() const { return impl_->x; }
HistMode HistEngine::mode() const { return impl_->mode; }
const HistLimits& HistEngine::limits() const { return impl_->limits; }

double HistEngine::error_bound() const {
  if (impl_->mode == HistMode::exact) return 0.0;
  std::lock_guard lock(impl_->mu);
  return static_cast<double>(impl_->approx.add_ops()) * static_cast<double>(LDBL_EPSILON);
}

double HistEngine::pi(int f_hat, int f, uint32_t ell) const {
  validate_pi_args(f_hat, f);
  if (f == 0) return 1.0;  // single empty embedding
  std::lock_guard lock(impl_->mu);
  if (impl_->mode == HistMode::exact) {
    mpz_class tail, total;
    impl_->exact.tail_and_total(f, ell, f_hat, tail, total);
    if (total == 0)
      throw DataError("undefined probability: no embeddings for f=" + std::to_string(f) +
                      " in ell=" + std::to_string(ell));
    mpq_class q(tail, total);
    q.canonicalize();
    return q.get_d();
  }
  long double tail, total;
  impl_->approx.tail_and_total(f, ell, f_hat, tail, total);
  if (!(total > 0.0L))
    throw DataError("undefined probability: no embeddings for f=" + std::to_string(f) +
                    " in ell=" + std::to_string(ell));
  return static_cast<double>(tail / total);
}

std::vector<mpz_class> HistEngine::hist(int f, uint32_t ell) const {
  if (impl_->mode != HistMode::exact)
    throw UsageError("exact counts are unavailable in floating mode");
  std::lock_guard lock(impl_->mu);
  return impl_->exact.row(f, ell);
}

SpanHistogram compute_hist(int f, uint32_t ell, uint32_t x_threshold, const HistLimits& limits) {
  HistEngine engine(x_threshold, HistMode::exact, limits);
  SpanHistogram out;
  out.f = f;
  out.ell = ell;
  out.x_threshold = x_threshold;
  out.counts = engine.hist(f, ell);
  return out;
}

SpanHistogram reference_hist(int f, uint32_t ell, uint32_t x_threshold) {
  if (x_threshold < 1) throw UsageError("span threshold must be >= 1");
  if (f < 0) throw DataError("negative occurrence count");
  if (f > 3 || ell > 12)
    throw CapacityError("reference enumeration is exponential; limited to f<=3, ell<=12");

  // Plain enumeration: pick the first interval (i, j), recurse on the suffix.
  auto go = [&](auto&& self, int ff, uint32_t len) -> std::vector<mpz_class> {
    std::vector<mpz_class> hist(static_cast<size_t>(ff) + 1);
    if (ff > static_cast<int>(len)) return hist;
    if (ff == 0) {
      hist[0] = 1;
      return hist;
    }
    for (uint32_t i = 1; i <= len - 1; ++i) {
      for (uint32_t j = i + 1; j <= len; ++j) {
        auto sub = self(self, ff - 1, len - j);
        for (int k = 0; k <= ff - 1; ++k) {
          if (j - i < x_threshold)
            hist[static_cast<size_t>(k) + 1] += sub[static_cast<size_t>(k)];
          else
            hist[static_cast<size_t>(k)] += sub[static_cast<size_t>(k)];
        }
      }
    }
    return hist;
  };

  SpanHistogram out;
  out.f = f;
  out.ell = ell;
  out.x_threshold = x_threshold;
  out.counts = go(go, f, ell);
  return out;
}

void publish_table(const HistEngine& engine, int f_max, uint32_t ell_max,
                   const std::filesystem::path& out_path) {
  if (f_max < 1) throw UsageError("table f_max must be >= 1");
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write table file: " + out_path.string());
  out << kTableMagic << "\n";
  out << "x=" << engine.x_threshold() << " f_max=" << f_max << " ell_max=" << ell_max
      << " mode=" << (engine.mode() == HistMode::exact ? "exact" : "float");
  out << " err_bound=" << fmt17(engine.error_bound()) << "\n";
  out << "BINARY\n";
  for (int f = 1; f <= f_max; ++f)
    for (uint32_t ell = 2 * static_cast<uint32_t>(f); ell <= ell_max; ++ell)
      for (int f_hat = 0; f_hat <= f; ++f_hat) put_f64(out, engine.pi(f_hat, f, ell));
  if (!out) throw DataError("failed writing table file: " + out_path.string());
}

PiTable PiTable::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    throw DataError("cannot read table file: " + file.string() +
                    " (generate it with the tables command)");
  std::string line;
  if (!std::getline(in, line) || line != kTableMagic)
    throw DataError("not a probability table (bad magic): " + file.string());
  if (!std::getline(in, line))
    throw DataError("corrupt table file " + file.string() + ": missing header");

  PiTable table;
  {
    std::istringstream hdr(line);
    std::string kv;
    while (hdr >> kv) {
      if (kv.rfind("x=", 0) == 0) table.x_ = static_cast<uint32_t>(std::stoul(kv.substr(2)));
      else if (kv.rfind("f_max=", 0) == 0) table.f_max_ = std::stoi(kv.substr(6));
      else if (kv.rfind("ell_max=", 0) == 0)
        table.ell_max_ = static_cast<uint32_t>(std::stoul(kv.substr(8)));
      else if (kv.rfind("mode=", 0) == 0)
        table.mode_ = kv.substr(5) == "float" ? HistMode::floating : HistMode::exact;
      else if (kv.rfind("err_bound=", 0) == 0) table.err_bound_ = std::stod(kv.substr(10));
    }
  }
  if (!std::getline(in, line) || line != "BINARY")
    throw DataError("corrupt table file " + file.string() + ": missing binary marker");
  if (table.f_max_ < 1 || table.x_ < 1)
    throw DataError("corrupt table file " + file.string() + ": bad ranges");

  table.f_base_.assign(static_cast<size_t>(table.f_max_) + 1, 0);
  size_t cells = 0;
  for (int f = 1; f <= table.f_max_; ++f) {
    table.f_base_[static_cast<size_t>(f)] = cells;
    uint32_t lo = 2 * static_cast<uint32_t>(f);
    if (table.ell_max_ >= lo)
      cells += static_cast<size_t>(table.ell_max_ - lo + 1) * (static_cast<size_t>(f) + 1);
  }
  table.values_.reserve(cells);
  for (size_t i = 0; i < cells; ++i) table.values_.push_back(get_f64(in, file.string()));
  return table;
}

uint32_t PiTable::x_threshold() const { return x_; }

size_t PiTable::cell_offset(int f, uint32_t ell) const {
  uint32_t lo = 2 * static_cast<uint32_t>(f);
  return f_base_[static_cast<size_t>(f)] +
         static_cast<size_t>(ell - lo) * (static_cast<size_t>(f) + 1);
}

double PiTable::pi(int f_hat, int f, uint32_t ell) const {
  validate_pi_args(f_hat, f);
  if (f == 0) return 1.0;
  if (2 * static_cast<uint32_t>(f) > ell)
    throw DataError("undefined probability: no embeddings for f=" + std::to_string(f) +
                    " in ell=" + std::to_string(ell));
  if (f > f_max_ || ell > ell_max_)
    throw TableMissError("table for x=" + std::to_string(x_) + " covers f<=" +
                         std::to_string(f_max_) + ", ell<=" + std::to_string(ell_max_) +
                         "; requested f=" + std::to_string(f) + ", ell=" + std::to_string(ell) +
                         ". Regenerate with the tables command.");
  return values_[cell_offset(f, ell) + static_cast<size_t>(f_hat)];
}

void PiTable::export_tsv(std::ostream& out) const {
  out << "f_hat\tf\tell\tpi\n";
  for (int f = 1; f <= f_max_; ++f)
    for (uint32_t ell = 2 * static_cast<uint32_t>(f); ell <= ell_max_; ++ell)
      for (int f_hat = 0; f_hat <= f; ++f_hat)
        out << f_hat << '\t' << f << '\t' << ell << '\t'
            << fmt17(values_[cell_offset(f, ell) + static_cast<size_t>(f_hat)]) << '\n';
}

}  // namespace lexsig
