#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace smash {

/// Which part of a run an operation is charged to.
enum class Phase : std::uint8_t { index = 0, compute = 1, convert = 2 };

std::string_view to_string(Phase p) noexcept;

/// Abstract operation counts. Categories:
///  - index_ops: work spent discovering nonzero positions (index-array loads,
///    comparisons, bit-scan steps, BMU instructions);
///  - value_ops: multiply-adds (or semiring products) on matrix values;
///  - mem_loads: indirect, data-dependent memory accesses;
///  - mem_block_loads / buffer_refills: BMU bitmap block transfers. These are
///    hardware events, not instructions, and are excluded from instr_total.
struct Counts {
  std::uint64_t index_ops = 0;
  std::uint64_t value_ops = 0;
  std::uint64_t mem_loads = 0;
  std::uint64_t mem_block_loads = 0;
  std::uint64_t buffer_refills = 0;

  std::uint64_t instr_total() const noexcept { return index_ops + value_ops + mem_loads; }

  Counts& operator+=(const Counts& o) noexcept {
    index_ops += o.index_ops;
    value_ops += o.value_ops;
    mem_loads += o.mem_loads;
    mem_block_loads += o.mem_block_loads;
    buffer_refills += o.buffer_refills;
    return *this;
  }
  Counts& operator-=(const Counts& o) noexcept {
    index_ops -= o.index_ops;
    value_ops -= o.value_ops;
    mem_loads -= o.mem_loads;
    mem_block_loads -= o.mem_block_loads;
    buffer_refills -= o.buffer_refills;
    return *this;
  }
  friend Counts operator+(Counts a, const Counts& b) noexcept { return a += b; }
  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Per-phase counters. Only ever incremented.
class OpCounters {
 public:
  void add_index_ops(std::uint64_t n, Phase p = Phase::index) noexcept { at(p).index_ops += n; }
  void add_value_ops(std::uint64_t n, Phase p = Phase::compute) noexcept { at(p).value_ops += n; }
  void add_mem_loads(std::uint64_t n, Phase p = Phase::compute) noexcept { at(p).mem_loads += n; }
  void add_block_loads(std::uint64_t n, Phase p = Phase::index) noexcept { at(p).mem_block_loads += n; }
  void add_refills(std::uint64_t n, Phase p = Phase::index) noexcept { at(p).buffer_refills += n; }

  const Counts& phase(Phase p) const noexcept { return by_phase_[static_cast<std::size_t>(p)]; }

  Counts total() const noexcept {
    Counts sum;
    for (const Counts& c : by_phase_) sum += c;
    return sum;
  }

  OpCounters& operator+=(const OpCounters& o) noexcept {
    for (std::size_t i = 0; i < by_phase_.size(); ++i) by_phase_[i] += o.by_phase_[i];
    return *this;
  }
  friend OpCounters operator+(OpCounters a, const OpCounters& b) noexcept { return a += b; }

  /// Work done between an earlier snapshot and now.
  OpCounters since(const OpCounters& earlier) const noexcept {
    OpCounters d = *this;
    for (std::size_t i = 0; i < by_phase_.size(); ++i) d.by_phase_[i] -= earlier.by_phase_[i];
    return d;
  }

  friend bool operator==(const OpCounters&, const OpCounters&) = default;

 private:
  Counts& at(Phase p) noexcept { return by_phase_[static_cast<std::size_t>(p)]; }

  std::array<Counts, 3> by_phase_{};
};

inline std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::index: return "index";
    case Phase::compute: return "compute";
    case Phase::convert: return "convert";
  }
  return "?";
}

}  // namespace smash
