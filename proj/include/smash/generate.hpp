#pragma once

#include <cstdint>
#include <vector>

#include "smash/coordinate_matrix.hpp"

namespace smash {

/// Uniformly placed nonzeros (without replacement), values in ±[0.5, 2).
/// Deterministic for a fixed seed on every platform.
CoordinateMatrix generate_synthetic(Index rows, Index cols, Index nnz, std::uint64_t seed);

/// Places nonzeros in aligned row-major blocks of `block_size` elements, each
/// chosen block holding round(target_locality * block_size) of them (the last
/// block takes the remainder), so that compute_stats reports the target
/// locality to within 1 / (2 * block_size).
CoordinateMatrix generate_with_locality(Index rows, Index cols, Index nnz, Index block_size,
                                        double target_locality, std::uint64_t seed);

/// n values in ±[0.5, 2), deterministic for a fixed seed.
std::vector<double> generate_vector(Index n, std::uint64_t seed);

}  // namespace smash
