#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smash {

using Index = std::uint64_t;

struct Entry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Canonical triplet form of a sparse matrix.
///
/// Entries are kept strictly sorted by (row, col), are within bounds, and are
/// never zero. The constructor sorts its input, drops explicit zeros and
/// rejects duplicate coordinates.
class CoordinateMatrix {
 public:
  CoordinateMatrix() = default;
  CoordinateMatrix(Index rows, Index cols, std::vector<Entry> entries = {});

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::span<const Entry> entries() const noexcept { return entries_; }

  /// Value at (row, col), 0.0 when not stored. Binary search.
  double at(Index row, Index col) const;

  CoordinateMatrix transposed() const;
  CoordinateMatrix negated() const;

  friend bool operator==(const CoordinateMatrix&, const CoordinateMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Entry> entries_;
};

/// Dense row-major copy, rows*cols doubles. Test and oracle helper.
std::vector<double> to_dense(const CoordinateMatrix& m);

CoordinateMatrix from_dense(Index rows, Index cols, std::span<const double> dense);

CoordinateMatrix identity(Index n);

}  // namespace smash
