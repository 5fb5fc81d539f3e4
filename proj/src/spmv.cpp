#include <algorithm>
#include <bit>
#include <cstring>

#include "smash/error.hpp"
#include "smash/kernels.hpp"

namespace smash {

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::dense: return "dense";
    case Backend::csr: return "csr";
    case Backend::csr_ideal: return "csr-ideal";
    case Backend::smash_sw: return "smash-sw";
    case Backend::smash_bmu: return "smash-bmu";
    case Backend::bcsr: return "bcsr";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  for (Backend b : {Backend::dense, Backend::csr, Backend::csr_ideal, Backend::smash_sw, Backend::smash_bmu,
                    Backend::bcsr}) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

namespace {

// y += a * b under the chosen semiring.
inline void accumulate(double& y, double a, double b, Semiring ring) {
  if (ring == Semiring::arithmetic) {
    y += a * b;
  } else if (a != 0.0 && b != 0.0) {
    y = 1.0;
  }
}

void check_vector(Index cols, std::span<const double> x) {
  if (x.size() != cols) {
    throw DimensionError("vector length " + std::to_string(x.size()) + " does not match " + std::to_string(cols) +
                         " matrix columns");
  }
}

// Multiply-adds one NZA block at linear position `start`.
void apply_block(const Layout& layout, Index start, std::span<const double> values, std::span<const double> x,
                 std::span<double> y, Semiring ring, OpCounters& counters) {
  std::uint64_t ops = 0;
  for (std::size_t e = 0; e < values.size(); ++e) {
    const auto rc = layout.coordinates(start + e);
    if (!rc) continue;
    accumulate(y[rc->first], values[e], x[rc->second], ring);
    ++ops;
  }
  counters.add_value_ops(ops);
}

std::uint64_t load_word(std::span<const std::uint8_t> bytes, std::uint64_t word) {
  std::uint64_t v = 0;
  const std::uint64_t first = word * 8;
  const std::size_t n = std::min<std::size_t>(8, bytes.size() - first);
  for (std::size_t i = 0; i < n; ++i) v |= std::uint64_t{bytes[first + i]} << (8 * i);
  return v;
}

// Software-only traversal: word-at-a-time find-first-set, mask, repeat.
class SoftwareScan {
 public:
  SoftwareScan(const SmashMatrix& s, std::span<const double> x, std::span<double> y, Semiring ring,
               OpCounters& counters)
      : s_(s), x_(x), y_(y), ring_(ring), counters_(counters) {}

  void run() {
    const std::size_t top = s_.levels() - 1;
    scan(top, 0, s_.bitmap(top).size());
  }

 private:
  void scan(std::size_t level, std::uint64_t lo, std::uint64_t hi) {
    const Bitmap& bm = s_.bitmap(level);
    hi = std::min(hi, bm.size());
    if (lo >= hi) return;
    for (std::uint64_t w = lo / 64; w <= (hi - 1) / 64; ++w) {
      std::uint64_t word = load_word(bm.bytes(), w);
      counters_.add_index_ops(1);
      const std::uint64_t base = w * 64;
      if (lo > base) word &= ~std::uint64_t{0} << (lo - base);
      if (hi < base + 64) word &= (std::uint64_t{1} << (hi - base)) - 1;
      while (word != 0) {
        const std::uint64_t bit = base + static_cast<std::uint64_t>(std::countr_zero(word));
        word &= word - 1;
        counters_.add_index_ops(2);
        if (level == 0) {
          apply_block(s_.layout(), bit * s_.config().comp[0], s_.block(ordinal_++), x_, y_, ring_, counters_);
        } else {
          const std::uint64_t fan = s_.config().comp[level];
          scan(level - 1, bit * fan, (bit + 1) * fan);
        }
      }
    }
  }

  const SmashMatrix& s_;
  std::span<const double> x_;
  std::span<double> y_;
  Semiring ring_;
  OpCounters& counters_;
  std::size_t ordinal_ = 0;
};

}  // namespace

DenseVector spmv_dense(const CoordinateMatrix& m, std::span<const double> x, Semiring ring) {
  check_vector(m.cols(), x);
  DenseVector y(m.rows(), 0.0);
  for (const Entry& e : m.entries()) accumulate(y[e.row], e.value, x[e.col], ring);
  return y;
}

SpmvResult spmv_csr(const CsrMatrix& a, std::span<const double> x, Semiring ring) {
  check_vector(a.cols, x);
  SpmvResult r{DenseVector(a.rows, 0.0), {}, Backend::csr};
  for (Index i = 0; i < a.rows; ++i) {
    const std::uint32_t begin = a.row_ptr[i];
    const std::uint32_t end = a.row_ptr[i + 1];
    for (std::uint32_t j = begin; j < end; ++j) accumulate(r.output[i], a.values[j], x[a.col_ind[j]], ring);
    const std::uint64_t n = end - begin;
    r.counters.add_index_ops(1 + (n + 1) + n);
    r.counters.add_value_ops(n);
    r.counters.add_mem_loads(n);
  }
  return r;
}

SpmvResult spmv_csr_ideal(const CsrMatrix& a, std::span<const double> x, Semiring ring) {
  SpmvResult r = spmv_csr(a, x, ring);
  r.backend = Backend::csr_ideal;
  r.counters = OpCounters{};
  r.counters.add_value_ops(a.nnz());
  return r;
}

SpmvResult spmv_bcsr(const BcsrMatrix& a, std::span<const double> x, Semiring ring) {
  check_vector(a.cols, x);
  SpmvResult r{DenseVector(a.rows, 0.0), {}, Backend::bcsr};
  const Index elems = a.block_rows * a.block_cols;
  for (Index br = 0; br < a.block_row_count(); ++br) {
    const std::uint32_t begin = a.blk_row_ptr[br];
    const std::uint32_t end = a.blk_row_ptr[br + 1];
    r.counters.add_index_ops(1 + (end - begin + 1));
    for (std::uint32_t k = begin; k < end; ++k) {
      const Index bc = a.blk_col_ind[k];
      r.counters.add_index_ops(1);
      r.counters.add_mem_loads(a.block_cols);
      for (Index i = 0; i < a.block_rows; ++i) {
        const Index row = br * a.block_rows + i;
        if (row >= a.rows) break;
        for (Index j = 0; j < a.block_cols; ++j) {
          const Index col = bc * a.block_cols + j;
          if (col >= a.cols) break;
          accumulate(r.output[row], a.block_values[k * elems + i * a.block_cols + j], x[col], ring);
          r.counters.add_value_ops(1);
        }
      }
    }
  }
  return r;
}

SpmvResult spmv_smash_sw(const SmashMatrix& s, std::span<const double> x, Semiring ring) {
  check_vector(s.cols(), x);
  SpmvResult r{DenseVector(s.rows(), 0.0), {}, Backend::smash_sw};
  SoftwareScan(s, x, r.output, ring, r.counters).run();
  return r;
}

SpmvResult spmv_smash_bmu(Bmu& bmu, std::size_t grp, const SmashMatrix& s, std::span<const double> x,
                          Semiring ring) {
  check_vector(s.cols(), x);
  SpmvResult r{DenseVector(s.rows(), 0.0), {}, Backend::smash_bmu};
  const Layout& layout = s.layout();
  if (layout.element_count() == 0) return r;

  const OpCounters before = bmu.group(grp).counters();
  const std::size_t levels = s.levels();
  // The group sees the linear axis as major lines of `stride` elements.
  bmu.matinfo(grp, layout.major_count(), layout.stride);
  for (std::size_t lvl = levels; lvl-- > 0;) bmu.bmapinfo(grp, s.config().comp[lvl], lvl);
  for (std::size_t lvl = levels; lvl-- > 0;) bmu.rdbmap(grp, lvl, s.bitmap(lvl).bytes(), 0);

  std::size_t ordinal = 0;
  while (bmu.pbmap(grp) == ScanStatus::found) {
    const IndexPair at = bmu.rdind(grp);
    const Index start = at.row * layout.stride + at.col;
    apply_block(layout, start, s.block(ordinal++), x, r.output, ring, r.counters);
  }
  if (ordinal != s.block_count()) throw CorruptionError("BMU scan and NZA disagree on the block count");
  r.counters += bmu.group(grp).counters().since(before);
  return r;
}

SpmvEngine::SpmvEngine(const CoordinateMatrix& m, Backend backend, SmashConfig config, Index bcsr_block)
    : backend_(backend), rows_(m.rows()), cols_(m.cols()), matrix_(m) {
  switch (backend) {
    case Backend::dense: break;
    case Backend::csr:
    case Backend::csr_ideal: matrix_ = to_csr(m); break;
    case Backend::bcsr: matrix_ = to_bcsr(m, bcsr_block, bcsr_block); break;
    case Backend::smash_sw:
    case Backend::smash_bmu:
      matrix_ = encode(m, config);
      if (backend == Backend::smash_bmu) bmu_ = std::make_unique<Bmu>();
      break;
  }
}

SpmvResult SpmvEngine::apply(std::span<const double> x, Semiring ring) {
  switch (backend_) {
    case Backend::dense: {
      const auto& m = std::get<CoordinateMatrix>(matrix_);
      SpmvResult r{spmv_dense(m, x, ring), {}, Backend::dense};
      r.counters.add_value_ops(m.rows() * m.cols());
      return r;
    }
    case Backend::csr: return spmv_csr(std::get<CsrMatrix>(matrix_), x, ring);
    case Backend::csr_ideal: return spmv_csr_ideal(std::get<CsrMatrix>(matrix_), x, ring);
    case Backend::bcsr: return spmv_bcsr(std::get<BcsrMatrix>(matrix_), x, ring);
    case Backend::smash_sw: return spmv_smash_sw(std::get<SmashMatrix>(matrix_), x, ring);
    case Backend::smash_bmu: return spmv_smash_bmu(*bmu_, 0, std::get<SmashMatrix>(matrix_), x, ring);
  }
  throw ArgumentError("unknown backend");
}

}  // namespace smash
