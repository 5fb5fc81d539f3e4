#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smash/smash_matrix.hpp"

namespace smash {

/// Binary container, little-endian:
///
///   "SMSH" | u16 version (1) | u8 orientation | u8 levels | u32 rows | u32 cols
///   | u32 comp[levels] | u64 nza_block_count
///   | per bitmap, top level first: u64 byte length, bytes (LSB-first bits)
///   | NZA values as f64, nza_block_count * comp[0] of them
///
/// Orientation is 0 (row-major) or 1 (column-major); bit 7 flags the
/// segment-aligned layout.
inline constexpr std::uint16_t kContainerVersion = 1;

std::vector<std::uint8_t> serialize(const SmashMatrix& s);
/// Throws CorruptionError on any malformed or inconsistent input.
SmashMatrix deserialize(std::span<const std::uint8_t> bytes);

void write_container(std::ostream& out, const SmashMatrix& s);
SmashMatrix read_container(std::istream& in);
void write_container_file(const std::string& path, const SmashMatrix& s);
SmashMatrix read_container_file(const std::string& path);

}  // namespace smash
