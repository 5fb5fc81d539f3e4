#pragma once

#include <optional>

#include "smash/coordinate_matrix.hpp"

namespace smash {

struct SparsityStats {
  std::size_t nnz = 0;
  /// nnz / (rows * cols).
  double sparsity = 0.0;
  /// Average nonzeros per nonzero block divided by the block size, over the
  /// row-major linearization. Empty when the matrix has no nonzeros.
  std::optional<double> locality_of_sparsity;
  Index block_size = 1;
};

SparsityStats compute_stats(const CoordinateMatrix& m, Index block_size);

}  // namespace smash
