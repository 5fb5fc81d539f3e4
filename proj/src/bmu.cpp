#include "smash/bmu.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <ostream>
#include <string>

#include "smash/error.hpp"

namespace smash {

std::string_view to_string(ScanStatus s) noexcept {
  switch (s) {
    case ScanStatus::ready: return "ready";
    case ScanStatus::found: return "found";
    case ScanStatus::exhausted: return "exhausted";
  }
  return "?";
}

void BmuGroup::reset_scan() noexcept {
  started_ = false;
  status_ = ScanStatus::ready;
}

std::size_t BmuGroup::configured_levels() const noexcept {
  std::size_t n = 0;
  while (n < comp_.size() && comp_[n]) ++n;
  return n;
}

void BmuGroup::load_block(std::size_t level, std::uint64_t block_start) {
  Buffer& b = buffers_[level];
  b.data.fill(0);
  if (block_start < b.region.size()) {
    const std::size_t n = std::min<std::size_t>(kBufferBytes, b.region.size() - block_start);
    std::memcpy(b.data.data(), b.region.data() + block_start, n);
  }
  b.block_start = block_start;
  b.loaded = true;
  counters_.add_block_loads(1);
}

std::uint8_t BmuGroup::read_byte(std::size_t level, std::uint64_t byte) {
  Buffer& b = buffers_[level];
  if (!b.bound) throw BmuFault("Bitmap-" + std::to_string(level) + " buffer is not loaded");
  if (byte < b.offset) throw BmuFault("scan reached before the bound offset of Bitmap-" + std::to_string(level));
  const std::uint64_t block_start = b.offset + (byte - b.offset) / kBufferBytes * kBufferBytes;
  if (!b.loaded || block_start != b.block_start) {
    load_block(level, block_start);
    counters_.add_refills(1);
  }
  return b.data[byte - block_start];
}

std::uint64_t BmuGroup::find_next(std::size_t level, std::uint64_t from, std::uint64_t to) {
  to = std::min<std::uint64_t>(to, buffers_[level].region.size() * 8);
  while (from < to) {
    const std::uint8_t byte = read_byte(level, from >> 3) >> (from & 7);
    if (byte != 0) return std::min<std::uint64_t>(from + std::countr_zero(byte), to);
    from = (from | 7) + 1;
  }
  return to;
}

ScanStatus BmuGroup::scan() {
  const std::size_t levels = configured_levels();
  if (!dims_set_ || cols_ == 0 || levels == 0) throw BmuFault("PBMAP on an unconfigured group");
  const std::size_t top = levels - 1;
  if (!buffers_[top].bound) throw BmuFault("PBMAP before RDBMAP of the top bitmap");
  if (status_ == ScanStatus::exhausted) return status_;

  std::size_t level;
  if (!started_) {
    started_ = true;
    level = top;
    next_bit_[top] = buffers_[top].offset * 8;
    end_bit_[top] = buffers_[top].region.size() * 8;
  } else {
    level = 0;
  }
  while (true) {
    const std::uint64_t bit = find_next(level, next_bit_[level], end_bit_[level]);
    if (bit < end_bit_[level]) {
      next_bit_[level] = bit + 1;
      found_bit_[level] = bit;
      if (level == 0) break;
      const std::uint64_t fan = *comp_[level];
      --level;
      next_bit_[level] = bit * fan;
      end_bit_[level] = next_bit_[level] + fan;
    } else if (level == top) {
      status_ = ScanStatus::exhausted;
      return status_;
    } else {
      ++level;
    }
  }

  // Index = sum_i index_bit(i) * prod_{j<=i} comp(j), with index_bit(i) the
  // set-bit position local to the span selected at level i + 1.
  Index index = 0;
  Index span = 1;
  for (std::size_t i = 0; i <= top; ++i) {
    const Index local = i < top ? found_bit_[i] - found_bit_[i + 1] * *comp_[i + 1] : found_bit_[i];
    span *= *comp_[i];
    index += local * span;
  }
  out_ = {index / cols_, index % cols_};
  status_ = ScanStatus::found;
  return status_;
}

BmuGroup& Bmu::checked(std::size_t grp, const char* op) {
  if (grp >= kBmuGroups) {
    trace(op, grp, "", "fault");
    throw BmuFault(std::string(op) + ": group " + std::to_string(grp) + " out of range");
  }
  return groups_[grp];
}

void Bmu::trace(const char* op, std::size_t grp, const std::string& args, const std::string& result) {
  if (!tracing_) return;
  std::lock_guard lock(trace_mutex_);
  if (!trace_) return;
  *trace_ << op << ' ' << grp;
  if (!args.empty()) *trace_ << ' ' << args;
  *trace_ << " -> " << result << '\n';
}

void Bmu::set_trace(std::ostream* out) {
  std::lock_guard lock(trace_mutex_);
  trace_ = out;
  tracing_ = out != nullptr;
}

void Bmu::matinfo(std::size_t grp, Index rows, Index cols) {
  BmuGroup& g = checked(grp, "MATINFO");
  g.counters_.add_index_ops(1);
  g.rows_ = rows;
  g.cols_ = cols;
  g.dims_set_ = true;
  g.comp_.fill(std::nullopt);
  for (auto& b : g.buffers_) b = {};
  g.reset_scan();
  trace("MATINFO", grp, std::to_string(rows) + ' ' + std::to_string(cols), "ok");
}

void Bmu::bmapinfo(std::size_t grp, std::uint32_t comp, std::size_t lvl) {
  BmuGroup& g = checked(grp, "BMAPINFO");
  g.counters_.add_index_ops(1);
  const std::string args = std::to_string(comp) + ' ' + std::to_string(lvl);
  if (lvl >= kBuffersPerGroup) {
    trace("BMAPINFO", grp, args, "fault");
    throw BmuFault("BMAPINFO: level " + std::to_string(lvl) + " has no buffer");
  }
  if (comp < 2 || comp > kBmuMaxCompression || !std::has_single_bit(comp)) {
    trace("BMAPINFO", grp, args, "fault");
    throw BmuFault("BMAPINFO: compression ratio " + std::to_string(comp) +
                   " must be a power of two no larger than the buffer (2048)");
  }
  g.comp_[lvl] = comp;
  g.reset_scan();
  trace("BMAPINFO", grp, args, "ok");
}

void Bmu::rdbmap(std::size_t grp, std::size_t buf, std::span<const std::uint8_t> region, std::uint64_t offset) {
  BmuGroup& g = checked(grp, "RDBMAP");
  g.counters_.add_index_ops(1);
  if (buf >= kBuffersPerGroup) {
    trace("RDBMAP", grp, std::to_string(buf) + ' ' + std::to_string(offset), "fault");
    throw BmuFault("RDBMAP: buffer " + std::to_string(buf) + " out of range");
  }
  auto& b = g.buffers_[buf];
  b.region = region;
  b.offset = offset;
  b.bound = true;
  g.load_block(buf, offset);
  g.reset_scan();
  if (tracing_) trace("RDBMAP", grp, std::to_string(buf) + ' ' + std::to_string(offset), "ok");
}

ScanStatus Bmu::pbmap(std::size_t grp) {
  BmuGroup& g = checked(grp, "PBMAP");
  g.counters_.add_index_ops(1);
  try {
    const ScanStatus s = g.scan();
    if (tracing_) trace("PBMAP", grp, "", std::string(to_string(s)));
    return s;
  } catch (const BmuFault&) {
    trace("PBMAP", grp, "", "fault");
    throw;
  }
}

IndexPair Bmu::rdind(std::size_t grp) {
  BmuGroup& g = checked(grp, "RDIND");
  g.counters_.add_index_ops(1);
  if (g.status_ != ScanStatus::found) {
    trace("RDIND", grp, "", "fault");
    throw BmuFault("RDIND: no current block (status " + std::string(to_string(g.status_)) + ")");
  }
  if (tracing_) trace("RDIND", grp, "", std::to_string(g.out_.row) + ' ' + std::to_string(g.out_.col));
  return g.out_;
}

const BmuGroup& Bmu::group(std::size_t grp) const {
  if (grp >= kBmuGroups) throw BmuFault("group " + std::to_string(grp) + " out of range");
  return groups_[grp];
}

OpCounters Bmu::counters() const {
  OpCounters sum;
  for (const BmuGroup& g : groups_) sum += g.counters();
  return sum;
}

}  // namespace smash
