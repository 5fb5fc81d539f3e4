#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace smash {

/// Fixed-length bit vector stored LSB-first: bit 0 is the low bit of byte 0.
/// Bits past size() in the last byte are always zero.
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(std::uint64_t bits) : bits_(bits), bytes_((bits + 7) / 8, 0) {}
  Bitmap(std::uint64_t bits, std::vector<std::uint8_t> bytes) : bits_(bits), bytes_(std::move(bytes)) {}

  std::uint64_t size() const noexcept { return bits_; }
  std::uint64_t byte_size() const noexcept { return bytes_.size(); }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  bool test(std::uint64_t i) const noexcept { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
  void set(std::uint64_t i) noexcept { bytes_[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7)); }

  std::uint64_t popcount() const noexcept {
    std::uint64_t n = 0;
    for (std::uint8_t b : bytes_) n += static_cast<std::uint64_t>(std::popcount(b));
    return n;
  }

  /// First set bit in [from, to), or `to` when there is none.
  std::uint64_t find_next(std::uint64_t from, std::uint64_t to) const noexcept {
    if (to > bits_) to = bits_;
    while (from < to) {
      const std::uint8_t byte = bytes_[from >> 3] >> (from & 7);
      if (byte != 0) {
        const std::uint64_t hit = from + static_cast<std::uint64_t>(std::countr_zero(byte));
        return hit < to ? hit : to;
      }
      from = (from | 7) + 1;
    }
    return to;
  }

  bool any(std::uint64_t from, std::uint64_t to) const noexcept { return find_next(from, to) < to; }

  /// True when no bit at or past size() is set in the backing bytes.
  bool tail_clear() const noexcept {
    if (bytes_.size() != (bits_ + 7) / 8) return false;
    if (bits_ % 8 == 0) return true;
    return (bytes_.back() >> (bits_ % 8)) == 0;
  }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::uint64_t bits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace smash
