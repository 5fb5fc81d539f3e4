#pragma once

#include <iosfwd>
#include <string>

#include "smash/coordinate_matrix.hpp"

namespace smash {

/// Reads a Matrix Market coordinate file (real, integer or pattern; general,
/// symmetric or skew-symmetric). Symmetric storage is expanded, pattern
/// entries become 1.0 and explicit zeros are dropped. Throws ParseError.
CoordinateMatrix load_matrix_market(std::istream& in);
CoordinateMatrix load_matrix_market_file(const std::string& path);

/// Writes "coordinate real general" with shortest round-trip value text, so
/// re-loading reproduces every value bit for bit.
void write_matrix_market(std::ostream& out, const CoordinateMatrix& m);
void write_matrix_market_file(const std::string& path, const CoordinateMatrix& m);

}  // namespace smash
