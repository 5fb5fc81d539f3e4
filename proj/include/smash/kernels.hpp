#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "smash/bmu.hpp"
#include "smash/coordinate_matrix.hpp"
#include "smash/formats.hpp"
#include "smash/op_counters.hpp"
#include "smash/smash_matrix.hpp"

namespace smash {

using DenseVector = std::vector<double>;

enum class Backend : std::uint8_t { dense, csr, csr_ideal, smash_sw, smash_bmu, bcsr };

std::string_view to_string(Backend b) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

/// (plus, times) pair used by the SpMV kernels. `boolean` is OR/AND over
/// {0, 1}: a product is 1 when both operands are nonzero.
enum class Semiring : std::uint8_t { arithmetic, boolean };

template <class Output>
struct KernelResult {
  Output output;
  OpCounters counters;
  Backend backend = Backend::dense;
};

using SpmvResult = KernelResult<DenseVector>;
using MatrixResult = KernelResult<CoordinateMatrix>;

// SpMV. Counting rules, per backend:
//   csr       textbook loop: row_ptr[i] once per row, row_ptr[i+1] on
//             every loop test, one col_ind load per nonzero (index_ops); one
//             multiply-add (value_ops) and one indirect x load (mem_loads) per
//             nonzero.
//   csr-ideal same arithmetic, positions free: value_ops only.
//   bcsr      block-row bounds and one blk_col_ind load per block (index_ops);
//             one x load per block column (mem_loads); every in-range block
//             element is a multiply-add.
//   smash-sw  one index op per 64-bit bitmap word load, per find-first-set and
//             per mask of the found bit; every in-range element of a stored
//             block is a multiply-add.
//   smash-bmu each BMU instruction is one index op; multiply-adds as smash-sw.

DenseVector spmv_dense(const CoordinateMatrix& m, std::span<const double> x, Semiring ring = Semiring::arithmetic);
SpmvResult spmv_csr(const CsrMatrix& a, std::span<const double> x, Semiring ring = Semiring::arithmetic);
SpmvResult spmv_csr_ideal(const CsrMatrix& a, std::span<const double> x, Semiring ring = Semiring::arithmetic);
SpmvResult spmv_bcsr(const BcsrMatrix& a, std::span<const double> x, Semiring ring = Semiring::arithmetic);
SpmvResult spmv_smash_sw(const SmashMatrix& s, std::span<const double> x, Semiring ring = Semiring::arithmetic);
/// Runs the MATINFO / BMAPINFO / RDBMAP preamble and the PBMAP / RDIND loop
/// on group `grp`.
SpmvResult spmv_smash_bmu(Bmu& bmu, std::size_t grp, const SmashMatrix& s, std::span<const double> x,
                          Semiring ring = Semiring::arithmetic);

/// A matrix prepared once in one backend's format and multiplied repeatedly.
class SpmvEngine {
 public:
  SpmvEngine(const CoordinateMatrix& m, Backend backend, SmashConfig config = {}, Index bcsr_block = 2);

  SpmvResult apply(std::span<const double> x, Semiring ring = Semiring::arithmetic);
  Backend backend() const noexcept { return backend_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

 private:
  Backend backend_;
  Index rows_;
  Index cols_;
  std::variant<CoordinateMatrix, CsrMatrix, BcsrMatrix, SmashMatrix> matrix_;
  std::unique_ptr<Bmu> bmu_;
};

// SpMM, C = A * B.
//   csr       inner product with a two-cursor merge of A's row col_ind and B's
//             column row_ind: four pointer loads per (row, column) pair, one
//             index op per index load and per comparison; matches are one
//             multiply-add plus two indirect value loads.
//   csr-ideal only the matched multiply-adds.

CoordinateMatrix spmm_dense(const CoordinateMatrix& a, const CoordinateMatrix& b);
MatrixResult spmm_csr(const CsrMatrix& a, const CscMatrix& b);
MatrixResult spmm_csr_ideal(const CsrMatrix& a, const CscMatrix& b);

/// Single-level, segment-aligned encodings expected by spmm_smash_bmu.
SmashMatrix encode_spmm_lhs(const CoordinateMatrix& a, std::uint32_t comp0);
SmashMatrix encode_spmm_rhs(const CoordinateMatrix& b, std::uint32_t comp0);

struct SpmmOptions {
  /// Leave a (row, column) lane as soon as either stream moves past it.
  bool early_exit = true;
  std::size_t group_a = 0;
  std::size_t group_b = 1;
};

struct SpmmStats {
  std::uint64_t lanes = 0;
  std::uint64_t probes = 0;
  std::uint64_t matches = 0;
};

/// A is row-major and B column-major, both one level and segment aligned with
/// the same comp[0]. Each matrix gets its own BMU group; index matching is a
/// merge over the two PBMAP/RDIND streams of a lane.
MatrixResult spmm_smash_bmu(Bmu& bmu, const SmashMatrix& a, const SmashMatrix& b, SpmmOptions options = {},
                            SpmmStats* stats = nullptr);

// SpAdd, C = A + B. Exact cancellation drops the entry.
CoordinateMatrix spadd_dense(const CoordinateMatrix& a, const CoordinateMatrix& b);
MatrixResult spadd_csr(const CsrMatrix& a, const CsrMatrix& b);
/// Bitmaps are ORed level by level, NZA blocks merged, and blocks that cancel
/// to all zeros are dropped before the hierarchy is rebuilt.
KernelResult<SmashMatrix> spadd_smash_encoded(const SmashMatrix& a, const SmashMatrix& b);
MatrixResult spadd_smash(const SmashMatrix& a, const SmashMatrix& b);

}  // namespace smash
