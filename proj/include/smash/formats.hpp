#pragma once

#include <cstdint>
#include <vector>

#include "smash/coordinate_matrix.hpp"

namespace smash {

/// Compressed Sparse Row: row_ptr (rows + 1 offsets), col_ind and values
/// (nnz each). Column indices within a row strictly increase.
struct CsrMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint32_t> row_ptr;
  std::vector<std::uint32_t> col_ind;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return values.size(); }
};

/// Column-major mirror of CsrMatrix.
struct CscMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint32_t> col_ptr;
  std::vector<std::uint32_t> row_ind;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return values.size(); }
};

/// Block CSR. Each stored block is block_rows x block_cols doubles in
/// row-major order, zero-padded, and holds at least one nonzero.
struct BcsrMatrix {
  Index rows = 0;
  Index cols = 0;
  Index block_rows = 1;
  Index block_cols = 1;
  std::vector<std::uint32_t> blk_row_ptr;
  std::vector<std::uint32_t> blk_col_ind;
  std::vector<double> block_values;

  std::size_t block_count() const noexcept { return blk_col_ind.size(); }
  Index block_row_count() const noexcept { return (rows + block_rows - 1) / block_rows; }
};

CsrMatrix to_csr(const CoordinateMatrix& m);
CscMatrix to_csc(const CoordinateMatrix& m);
BcsrMatrix to_bcsr(const CoordinateMatrix& m, Index block_rows, Index block_cols);

CoordinateMatrix decode(const CsrMatrix& a);
CoordinateMatrix decode(const CscMatrix& a);
CoordinateMatrix decode(const BcsrMatrix& a);

/// Storage accounting: 8 bytes per value, 4 bytes per index or offset entry.
std::uint64_t storage_bytes(const CsrMatrix& a);
std::uint64_t storage_bytes(const CscMatrix& a);
std::uint64_t storage_bytes(const BcsrMatrix& a);

/// Uncompressed bytes (rows * cols * 8) over storage_bytes(a).
template <class Format>
double total_compression_ratio(const Format& a) {
  return static_cast<double>(a.rows) * static_cast<double>(a.cols) * 8.0 /
         static_cast<double>(storage_bytes(a));
}

}  // namespace smash
