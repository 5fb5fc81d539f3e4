#include "smash/coordinate_matrix.hpp"

#include <algorithm>
#include <string>

#include "smash/error.hpp"

namespace smash {

namespace {

bool position_less(const Entry& a, const Entry& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

CoordinateMatrix::CoordinateMatrix(Index rows, Index cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
  for (const Entry& e : entries_) {
    if (e.row >= rows_ || e.col >= cols_) {
      throw ArgumentError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                          ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                          " matrix");
    }
  }
  if (!std::is_sorted(entries_.begin(), entries_.end(), position_less)) {
    std::sort(entries_.begin(), entries_.end(), position_less);
  }
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row == b.row && a.col == b.col;
  });
  if (dup != entries_.end()) {
    throw ArgumentError("duplicate entry (" + std::to_string(dup->row) + ", " +
                        std::to_string(dup->col) + ")");
  }
}

double CoordinateMatrix::at(Index row, Index col) const {
  Entry probe{row, col, 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe, position_less);
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

CoordinateMatrix CoordinateMatrix::transposed() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back({e.col, e.row, e.value});
  return CoordinateMatrix(cols_, rows_, std::move(out));
}

CoordinateMatrix CoordinateMatrix::negated() const {
  std::vector<Entry> out(entries_.begin(), entries_.end());
  for (Entry& e : out) e.value = -e.value;
  return CoordinateMatrix(rows_, cols_, std::move(out));
}

std::vector<double> to_dense(const CoordinateMatrix& m) {
  std::vector<double> dense(m.rows() * m.cols(), 0.0);
  for (const Entry& e : m.entries()) dense[e.row * m.cols() + e.col] = e.value;
  return dense;
}

CoordinateMatrix from_dense(Index rows, Index cols, std::span<const double> dense) {
  if (dense.size() != rows * cols) throw DimensionError("dense buffer size does not match shape");
  std::vector<Entry> entries;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      double v = dense[r * cols + c];
      if (v != 0.0) entries.push_back({r, c, v});
    }
  }
  return CoordinateMatrix(rows, cols, std::move(entries));
}

CoordinateMatrix identity(Index n) {
  std::vector<Entry> entries;
  entries.reserve(n);
  for (Index i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  return CoordinateMatrix(n, n, std::move(entries));
}

}  // namespace smash
