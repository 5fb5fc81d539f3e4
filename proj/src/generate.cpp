#include "smash/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>
#include <vector>

#include "smash/error.hpp"

namespace smash {

namespace {

// Unbiased draw in [0, bound) by rejection; std distributions are not
// specified bit-for-bit across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

double draw_value(std::mt19937_64& rng) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  const double magnitude = 0.5 + 1.5 * unit;
  return (rng() & 1) ? -magnitude : magnitude;
}

// Floyd's sampling: k distinct values from [0, n), returned sorted.
std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t n, std::uint64_t k) {
  std::vector<std::uint64_t> out;
  if (k == n) {
    out.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

CoordinateMatrix from_positions(Index rows, Index cols, const std::vector<std::uint64_t>& positions,
                                std::mt19937_64& rng) {
  std::vector<Entry> entries;
  entries.reserve(positions.size());
  for (std::uint64_t p : positions) entries.push_back({p / cols, p % cols, draw_value(rng)});
  return CoordinateMatrix(rows, cols, std::move(entries));
}

}  // namespace

CoordinateMatrix generate_synthetic(Index rows, Index cols, Index nnz, std::uint64_t seed) {
  const Index cells = rows * cols;
  if (nnz > cells) throw ArgumentError("nnz exceeds rows*cols");
  std::mt19937_64 rng(seed);
  return from_positions(rows, cols, sample_distinct(rng, cells, nnz), rng);
}

CoordinateMatrix generate_with_locality(Index rows, Index cols, Index nnz, Index block_size,
                                        double target_locality, std::uint64_t seed) {
  if (block_size < 1) throw ArgumentError("block size must be at least 1");
  const double floor_locality = 1.0 / static_cast<double>(block_size);
  if (!(target_locality >= floor_locality - 1e-12 && target_locality <= 1.0 + 1e-12)) {
    throw ArgumentError("target locality must lie in [1/block_size, 1]");
  }
  std::mt19937_64 rng(seed);
  if (nnz == 0) return CoordinateMatrix(rows, cols);

  const auto per_block = std::clamp<Index>(
      static_cast<Index>(std::llround(target_locality * static_cast<double>(block_size))), 1,
      block_size);
  const Index block_count = (nnz + per_block - 1) / per_block;
  const Index full_blocks = rows * cols / block_size;
  if (block_count > full_blocks) {
    throw ArgumentError("matrix too small for " + std::to_string(nnz) + " nonzeros at locality " +
                        std::to_string(target_locality));
  }

  const auto blocks = sample_distinct(rng, full_blocks, block_count);
  std::vector<std::uint64_t> positions;
  positions.reserve(nnz);
  Index remaining = nnz;
  for (std::uint64_t b : blocks) {
    const Index take = std::min(per_block, remaining);
    remaining -= take;
    for (std::uint64_t offset : sample_distinct(rng, block_size, take)) {
      positions.push_back(b * block_size + offset);
    }
  }
  return from_positions(rows, cols, positions, rng);
}

std::vector<double> generate_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = draw_value(rng);
  return v;
}

}  // namespace smash
