#include "smash/stats.hpp"

#include "smash/error.hpp"

namespace smash {

SparsityStats compute_stats(const CoordinateMatrix& m, Index block_size) {
  if (block_size < 1) throw ArgumentError("block size must be at least 1");
  SparsityStats s;
  s.block_size = block_size;
  s.nnz = m.nnz();
  const double cells = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
  s.sparsity = cells > 0 ? static_cast<double>(m.nnz()) / cells : 0.0;
  if (m.empty()) return s;

  // Entries are sorted by (row, col), so linear positions ascend and each
  // block's members are contiguous in the entry list.
  std::size_t blocks = 0;
  Index last_block = 0;
  for (const Entry& e : m.entries()) {
    const Index block = (e.row * m.cols() + e.col) / block_size;
    if (blocks == 0 || block != last_block) {
      ++blocks;
      last_block = block;
    }
  }
  const double per_block = static_cast<double>(m.nnz()) / static_cast<double>(blocks);
  s.locality_of_sparsity = per_block / static_cast<double>(block_size);
  return s;
}

}  // namespace smash
