#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smash/kernels.hpp"
#include "smash/smash_matrix.hpp"

namespace smash::cli {

/// One measured run. Carries everything needed to repeat it.
struct BenchRecord {
  std::string workload;
  std::string matrix;
  std::string backend;
  SmashConfig config;
  Index bcsr_block = 2;
  std::uint64_t seed = 0;
  Counts counts;
  std::uint64_t storage_bytes = 0;
  double compression_ratio = 0.0;
  double wall_ms = 0.0;
  double conversion_fraction = 0.0;
  bool verified = false;
};

/// Fixed CSV column order.
std::string csv_header();
std::string to_csv(const BenchRecord& r);

/// Parses a compression-ratio list: comma-separated items, each a number or a
/// power-of-two range "a..b". A trailing "-sweep" marks the list as a sweep of
/// Bitmap-0 ratios rather than one per-level configuration.
struct CompSpec {
  std::vector<std::uint32_t> values;
  bool sweep = false;
};
CompSpec parse_comp(const std::string& text);

/// Entry point behind the `smash` executable. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smash::cli
