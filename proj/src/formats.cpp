#include "smash/formats.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "smash/error.hpp"

namespace smash {

namespace {

constexpr std::uint64_t kIndexBytes = 4;
constexpr std::uint64_t kValueBytes = 8;

void check_32bit(const CoordinateMatrix& m) {
  constexpr auto limit = std::numeric_limits<std::uint32_t>::max();
  if (m.rows() > limit || m.cols() > limit || m.nnz() > limit) {
    throw DimensionError("matrix exceeds 32-bit index range");
  }
}

}  // namespace

CsrMatrix to_csr(const CoordinateMatrix& m) {
  check_32bit(m);
  CsrMatrix a;
  a.rows = m.rows();
  a.cols = m.cols();
  a.row_ptr.assign(m.rows() + 1, 0);
  a.col_ind.reserve(m.nnz());
  a.values.reserve(m.nnz());
  for (const Entry& e : m.entries()) {
    ++a.row_ptr[e.row + 1];
    a.col_ind.push_back(static_cast<std::uint32_t>(e.col));
    a.values.push_back(e.value);
  }
  for (Index i = 0; i < m.rows(); ++i) a.row_ptr[i + 1] += a.row_ptr[i];
  return a;
}

CscMatrix to_csc(const CoordinateMatrix& m) {
  check_32bit(m);
  CscMatrix a;
  a.rows = m.rows();
  a.cols = m.cols();
  a.col_ptr.assign(m.cols() + 1, 0);
  for (const Entry& e : m.entries()) ++a.col_ptr[e.col + 1];
  for (Index j = 0; j < m.cols(); ++j) a.col_ptr[j + 1] += a.col_ptr[j];
  a.row_ind.resize(m.nnz());
  a.values.resize(m.nnz());
  std::vector<std::uint32_t> next(a.col_ptr.begin(), a.col_ptr.end() - 1);
  // Row-sorted entries land in each column in increasing row order.
  for (const Entry& e : m.entries()) {
    const std::uint32_t slot = next[e.col]++;
    a.row_ind[slot] = static_cast<std::uint32_t>(e.row);
    a.values[slot] = e.value;
  }
  return a;
}

BcsrMatrix to_bcsr(const CoordinateMatrix& m, Index block_rows, Index block_cols) {
  if (block_rows < 1 || block_cols < 1) throw ArgumentError("BCSR block shape must be at least 1x1");
  check_32bit(m);
  BcsrMatrix a;
  a.rows = m.rows();
  a.cols = m.cols();
  a.block_rows = block_rows;
  a.block_cols = block_cols;
  const Index brow_count = a.block_row_count();
  const Index block_elems = block_rows * block_cols;
  a.blk_row_ptr.assign(brow_count + 1, 0);

  // Entries are row-sorted; gather one block row at a time.
  auto entries = m.entries();
  std::size_t first = 0;
  for (Index br = 0; br < brow_count; ++br) {
    const Index row_end = std::min((br + 1) * block_rows, m.rows());
    std::size_t last = first;
    while (last < entries.size() && entries[last].row < row_end) ++last;
    std::map<Index, std::size_t> slot_of_block;  // block column -> storage slot
    for (std::size_t k = first; k < last; ++k) slot_of_block.emplace(entries[k].col / block_cols, 0);
    for (auto& [bc, slot] : slot_of_block) {
      slot = a.blk_col_ind.size();
      a.blk_col_ind.push_back(static_cast<std::uint32_t>(bc));
      a.block_values.resize(a.block_values.size() + block_elems, 0.0);
    }
    for (std::size_t k = first; k < last; ++k) {
      const Entry& e = entries[k];
      const std::size_t slot = slot_of_block[e.col / block_cols];
      a.block_values[slot * block_elems + (e.row % block_rows) * block_cols + e.col % block_cols] =
          e.value;
    }
    a.blk_row_ptr[br + 1] = static_cast<std::uint32_t>(a.blk_col_ind.size());
    first = last;
  }
  return a;
}

CoordinateMatrix decode(const CsrMatrix& a) {
  std::vector<Entry> entries;
  entries.reserve(a.nnz());
  for (Index i = 0; i < a.rows; ++i) {
    for (std::uint32_t j = a.row_ptr[i]; j < a.row_ptr[i + 1]; ++j) {
      entries.push_back({i, a.col_ind[j], a.values[j]});
    }
  }
  return CoordinateMatrix(a.rows, a.cols, std::move(entries));
}

CoordinateMatrix decode(const CscMatrix& a) {
  std::vector<Entry> entries;
  entries.reserve(a.nnz());
  for (Index j = 0; j < a.cols; ++j) {
    for (std::uint32_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
      entries.push_back({a.row_ind[k], j, a.values[k]});
    }
  }
  return CoordinateMatrix(a.rows, a.cols, std::move(entries));
}

CoordinateMatrix decode(const BcsrMatrix& a) {
  std::vector<Entry> entries;
  const Index block_elems = a.block_rows * a.block_cols;
  for (Index br = 0; br < a.block_row_count(); ++br) {
    for (std::uint32_t k = a.blk_row_ptr[br]; k < a.blk_row_ptr[br + 1]; ++k) {
      const Index bc = a.blk_col_ind[k];
      for (Index i = 0; i < a.block_rows; ++i) {
        for (Index j = 0; j < a.block_cols; ++j) {
          const double v = a.block_values[k * block_elems + i * a.block_cols + j];
          if (v != 0.0) entries.push_back({br * a.block_rows + i, bc * a.block_cols + j, v});
        }
      }
    }
  }
  return CoordinateMatrix(a.rows, a.cols, std::move(entries));
}

std::uint64_t storage_bytes(const CsrMatrix& a) {
  return kValueBytes * a.values.size() + kIndexBytes * (a.col_ind.size() + a.row_ptr.size());
}

std::uint64_t storage_bytes(const CscMatrix& a) {
  return kValueBytes * a.values.size() + kIndexBytes * (a.row_ind.size() + a.col_ptr.size());
}

std::uint64_t storage_bytes(const BcsrMatrix& a) {
  return kValueBytes * a.block_values.size() +
         kIndexBytes * (a.blk_col_ind.size() + a.blk_row_ptr.size());
}

}  // namespace smash
