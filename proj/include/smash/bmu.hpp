#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>

#include "smash/coordinate_matrix.hpp"
#include "smash/op_counters.hpp"

namespace smash {

inline constexpr std::size_t kBmuGroups = 4;
inline constexpr std::size_t kBuffersPerGroup = 3;
inline constexpr std::size_t kBufferBytes = 256;
inline constexpr std::uint32_t kBmuMaxCompression = kBufferBytes * 8;

enum class ScanStatus : std::uint8_t { ready, found, exhausted };

struct IndexPair {
  Index row = 0;
  Index col = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// One BMU slice: configuration registers, three 256-byte bitmap buffers
/// (buffer i holds Bitmap-i), per-level scan cursors and the two output index
/// registers. A group is driven by one instruction stream at a time.
class BmuGroup {
 public:
  Index rows_reg() const noexcept { return rows_; }
  Index cols_reg() const noexcept { return cols_; }
  std::optional<std::uint32_t> comp_reg(std::size_t level) const { return comp_.at(level); }
  ScanStatus status() const noexcept { return status_; }
  const OpCounters& counters() const noexcept { return counters_; }

 private:
  friend class Bmu;

  struct Buffer {
    std::span<const std::uint8_t> region;
    std::uint64_t offset = 0;       // byte offset the region was bound at
    std::uint64_t block_start = 0;  // region byte held in data[0]
    bool bound = false;
    bool loaded = false;
    std::array<std::uint8_t, kBufferBytes> data{};
  };

  void reset_scan() noexcept;
  std::size_t configured_levels() const noexcept;
  void load_block(std::size_t level, std::uint64_t block_start);
  std::uint8_t read_byte(std::size_t level, std::uint64_t byte);
  std::uint64_t find_next(std::size_t level, std::uint64_t from, std::uint64_t to);
  ScanStatus scan();

  Index rows_ = 0;
  Index cols_ = 0;
  bool dims_set_ = false;
  std::array<std::optional<std::uint32_t>, kBuffersPerGroup> comp_{};
  std::array<Buffer, kBuffersPerGroup> buffers_{};
  std::array<std::uint64_t, kBuffersPerGroup> next_bit_{};
  std::array<std::uint64_t, kBuffersPerGroup> end_bit_{};
  std::array<std::uint64_t, kBuffersPerGroup> found_bit_{};
  bool started_ = false;
  ScanStatus status_ = ScanStatus::ready;
  IndexPair out_{};
  OpCounters counters_;
};

/// Functional model of the Bitmap Management Unit and its five instructions.
/// Every instruction counts one index op on its group; bitmap block transfers
/// count mem_block_loads, and blocks fetched autonomously during a scan also
/// count buffer_refills. Faults are thrown as BmuFault.
///
/// Bound bitmap regions are read in place: the caller keeps them alive while
/// the group may still scan them.
class Bmu {
 public:
  /// MATINFO: load matrix dimensions. Clears the group's bitmap parameters
  /// and buffer bindings.
  void matinfo(std::size_t grp, Index rows, Index cols);
  /// BMAPINFO: load the compression ratio of Bitmap-lvl.
  void bmapinfo(std::size_t grp, std::uint32_t comp, std::size_t lvl);
  /// RDBMAP: bind Bitmap-buf to `region` and load the 256-byte block at
  /// `offset` (zero past the region end). Bit positions stay absolute within
  /// the region; the scan restarts at offset * 8 on the top level.
  void rdbmap(std::size_t grp, std::size_t buf, std::span<const std::uint8_t> region, std::uint64_t offset = 0);
  /// PBMAP: advance the depth-first scan to the next nonzero block.
  ScanStatus pbmap(std::size_t grp);
  /// RDIND: read (row, col) of the current block. Does not advance the scan.
  IndexPair rdind(std::size_t grp);

  const BmuGroup& group(std::size_t grp) const;
  /// Sum over all groups.
  OpCounters counters() const;

  /// One line per instruction, `OP grp args -> result`. Pass nullptr to stop.
  void set_trace(std::ostream* out);

 private:
  BmuGroup& checked(std::size_t grp, const char* op);
  void trace(const char* op, std::size_t grp, const std::string& args, const std::string& result);

  std::array<BmuGroup, kBmuGroups> groups_{};
  std::ostream* trace_ = nullptr;
  std::atomic<bool> tracing_{false};  // skips string formatting when off
  std::mutex trace_mutex_;
};

std::string_view to_string(ScanStatus s) noexcept;

}  // namespace smash
