#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "smash/bitmap.hpp"
#include "smash/coordinate_matrix.hpp"
#include "smash/formats.hpp"

namespace smash {

class OpCounters;

enum class Orientation : std::uint8_t { row_major = 0, column_major = 1 };

inline constexpr std::size_t kMaxLevels = 3;
/// One 256-byte BMU buffer covers 2048 bits, the largest ratio a level may use.
inline constexpr std::uint32_t kMaxCompression = 2048;

/// Shape of the bitmap hierarchy. comp[0] is the number of matrix elements
/// per Bitmap-0 bit (the NZA block size); comp[i] for i >= 1 is the number of
/// Bitmap-(i-1) bits summarized by one Bitmap-i bit.
struct SmashConfig {
  std::vector<std::uint32_t> comp{2};
  Orientation orientation = Orientation::row_major;
  /// Pad every row (row-major) or column (column-major) to a whole number of
  /// Bitmap-0 bytes so each line's bitmap segment is byte addressable.
  bool segment_aligned = false;

  std::size_t levels() const noexcept { return comp.size(); }
  std::uint32_t block_size() const noexcept { return comp.empty() ? 0 : comp[0]; }
  /// Throws ConfigError unless 1..3 levels of power-of-two ratios in [2, 2048].
  void validate() const;

  friend bool operator==(const SmashConfig&, const SmashConfig&) = default;
};

/// Placement of matrix elements on the linear element axis.
struct Layout {
  Index rows = 0;
  Index cols = 0;
  Orientation orientation = Orientation::row_major;
  /// Distance between consecutive rows (row-major) or columns (column-major).
  Index stride = 0;

  static Layout of(Index rows, Index cols, const SmashConfig& config);

  Index major_count() const noexcept { return orientation == Orientation::row_major ? rows : cols; }
  Index minor_count() const noexcept { return orientation == Orientation::row_major ? cols : rows; }
  Index element_count() const noexcept { return major_count() * stride; }

  Index position(Index row, Index col) const noexcept {
    return orientation == Orientation::row_major ? row * stride + col : col * stride + row;
  }

  /// (row, col) at linear position p, or nullopt for padding positions.
  std::optional<std::pair<Index, Index>> coordinates(Index p) const noexcept {
    const Index major = p / stride;
    const Index minor = p % stride;
    if (major >= major_count() || minor >= minor_count()) return std::nullopt;
    if (orientation == Orientation::row_major) return std::pair{major, minor};
    return std::pair{minor, major};
  }

  friend bool operator==(const Layout&, const Layout&) = default;
};

/// Bit lengths of Bitmap-0 .. Bitmap-(levels-1) for a matrix of this shape.
std::vector<std::uint64_t> bitmap_lengths(const Layout& layout, const SmashConfig& config);

struct BlockRef {
  /// Linear element index of the block's first element.
  Index start = 0;
  std::span<const double> values;
};

/// Hierarchical-bitmap encoding: bitmaps[0] is Bitmap-0, bitmaps[levels-1]
/// the top; the NZA holds one block of comp[0] values per set Bitmap-0 bit,
/// in ascending block order.
class SmashMatrix {
 public:
  SmashMatrix() = default;
  /// Validates every encoding invariant; throws CorruptionError.
  SmashMatrix(Index rows, Index cols, SmashConfig config, std::vector<Bitmap> bitmaps,
              std::vector<double> nza);

  Index rows() const noexcept { return layout_.rows; }
  Index cols() const noexcept { return layout_.cols; }
  const SmashConfig& config() const noexcept { return config_; }
  const Layout& layout() const noexcept { return layout_; }
  std::size_t levels() const noexcept { return bitmaps_.size(); }
  const Bitmap& bitmap(std::size_t level) const { return bitmaps_.at(level); }
  const Bitmap& top_bitmap() const { return bitmaps_.back(); }
  std::span<const double> nza() const noexcept { return nza_; }
  std::size_t block_count() const noexcept { return config_.comp.empty() ? 0 : nza_.size() / config_.comp[0]; }
  std::span<const double> block(std::size_t k) const {
    return std::span<const double>(nza_).subspan(k * config_.comp[0], config_.comp[0]);
  }

  std::uint64_t bitmap_bytes() const noexcept;
  std::uint64_t nza_bytes() const noexcept { return 8 * nza_.size(); }

  friend bool operator==(const SmashMatrix&, const SmashMatrix&) = default;

 private:
  Layout layout_;
  SmashConfig config_;
  std::vector<Bitmap> bitmaps_;
  std::vector<double> nza_;
};

SmashMatrix encode(const CoordinateMatrix& m, const SmashConfig& config);

/// Conversion from CSR: discovers nonzero blocks through CSR indexing, appends
/// them to the NZA, then builds Bitmap-0 and the upper levels. Work is charged
/// to the convert phase of `counters` when given.
SmashMatrix encode(const CsrMatrix& a, const SmashConfig& config, OpCounters* counters = nullptr);

/// Builds the hierarchy for the given strictly ascending block ids and their
/// values (comp[0] per block).
SmashMatrix assemble(Index rows, Index cols, const SmashConfig& config,
                     std::span<const Index> block_ids, std::vector<double> nza);

CoordinateMatrix decode(const SmashMatrix& s);

/// Linear element index of the block reached by a depth-first path.
/// path[i] is the set-bit position local to the Bitmap-i region selected by
/// the level above (path[levels-1] indexes the top bitmap, of length
/// `top_bits`). Returns sum_i path[i] * prod_{j<=i} comp[j].
Index linear_index(const SmashConfig& config, std::span<const Index> path, std::uint64_t top_bits);

/// Depth-first traversal of the hierarchy yielding NZA blocks in order.
class BlockCursor {
 public:
  explicit BlockCursor(const SmashMatrix& s);
  BlockCursor(SmashMatrix&&) = delete;  // the cursor borrows the matrix

  std::optional<BlockRef> next();
  /// Local set-bit path of the block last returned by next().
  std::span<const Index> path() const noexcept { return local_path_; }

 private:
  const SmashMatrix* s_;
  std::vector<std::uint64_t> next_bit_;
  std::vector<std::uint64_t> end_bit_;
  std::vector<std::uint64_t> found_bit_;
  std::vector<Index> local_path_;
  std::size_t level_ = 0;
  std::size_t ordinal_ = 0;
  bool started_ = false;
  bool done_ = false;
};

std::vector<BlockRef> enumerate_blocks(const SmashMatrix& s);

/// NZA values at 8 bytes each plus every bitmap level rounded up to whole bytes.
std::uint64_t storage_bytes(const SmashMatrix& s);
double total_compression_ratio(const SmashMatrix& s);

}  // namespace smash
