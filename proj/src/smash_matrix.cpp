#include "smash/smash_matrix.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "smash/error.hpp"
#include "smash/op_counters.hpp"

namespace smash {

void SmashConfig::validate() const {
  if (comp.empty() || comp.size() > kMaxLevels) {
    throw ConfigError("bitmap hierarchy needs 1 to " + std::to_string(kMaxLevels) + " levels, got " +
                      std::to_string(comp.size()));
  }
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const std::uint32_t c = comp[i];
    if (c < 2 || c > kMaxCompression || !std::has_single_bit(c)) {
      throw ConfigError("compression ratio of Bitmap-" + std::to_string(i) + " must be a power of two in [2, " +
                        std::to_string(kMaxCompression) + "], got " + std::to_string(c));
    }
  }
  if (orientation != Orientation::row_major && orientation != Orientation::column_major) {
    throw ConfigError("unknown orientation");
  }
}

Layout Layout::of(Index rows, Index cols, const SmashConfig& config) {
  Layout l{rows, cols, config.orientation, 0};
  l.stride = l.minor_count();
  if (config.segment_aligned) {
    const Index unit = Index{config.block_size()} * 8;
    l.stride = (l.stride + unit - 1) / unit * unit;
  }
  return l;
}

std::vector<std::uint64_t> bitmap_lengths(const Layout& layout, const SmashConfig& config) {
  std::uint64_t span = 1;
  for (std::uint32_t c : config.comp) span *= c;
  std::vector<std::uint64_t> bits(config.levels());
  bits.back() = (layout.element_count() + span - 1) / span;
  for (std::size_t i = config.levels() - 1; i > 0; --i) bits[i - 1] = bits[i] * config.comp[i];
  return bits;
}

SmashMatrix::SmashMatrix(Index rows, Index cols, SmashConfig config, std::vector<Bitmap> bitmaps,
                         std::vector<double> nza)
    : layout_(), config_(std::move(config)), bitmaps_(std::move(bitmaps)), nza_(std::move(nza)) {
  config_.validate();
  layout_ = Layout::of(rows, cols, config_);

  const auto lengths = bitmap_lengths(layout_, config_);
  if (bitmaps_.size() != lengths.size()) throw CorruptionError("bitmap count does not match levels");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (bitmaps_[i].size() != lengths[i] || !bitmaps_[i].tail_clear()) {
      throw CorruptionError("Bitmap-" + std::to_string(i) + " has the wrong length");
    }
  }
  const std::uint32_t c0 = config_.comp[0];
  if (nza_.size() % c0 != 0) throw CorruptionError("NZA length is not a whole number of blocks");
  if (bitmaps_[0].popcount() != nza_.size() / c0) {
    throw CorruptionError("Bitmap-0 popcount does not match NZA block count");
  }

  // Upper levels must be exactly the OR of their children.
  for (std::size_t i = 1; i < bitmaps_.size(); ++i) {
    const Bitmap& lower = bitmaps_[i - 1];
    const Bitmap& upper = bitmaps_[i];
    const std::uint64_t fan = config_.comp[i];
    for (std::uint64_t b = 0; b < upper.size(); ++b) {
      if (upper.test(b) != lower.any(b * fan, (b + 1) * fan)) {
        throw CorruptionError("Bitmap-" + std::to_string(i) + " bit " + std::to_string(b) +
                              " disagrees with Bitmap-" + std::to_string(i - 1));
      }
    }
  }

  // Every stored block holds a nonzero and padding positions stay zero.
  const Bitmap& b0 = bitmaps_[0];
  std::size_t k = 0;
  for (std::uint64_t bit = b0.find_next(0, b0.size()); bit < b0.size();
       bit = b0.find_next(bit + 1, b0.size()), ++k) {
    bool nonzero = false;
    for (std::uint32_t e = 0; e < c0; ++e) {
      const double v = nza_[k * c0 + e];
      if (v == 0.0) continue;
      if (!layout_.coordinates(bit * c0 + e)) throw CorruptionError("nonzero value in padding");
      nonzero = true;
    }
    if (!nonzero) throw CorruptionError("NZA block " + std::to_string(k) + " is all zero");
  }
}

std::uint64_t SmashMatrix::bitmap_bytes() const noexcept {
  std::uint64_t n = 0;
  for (const Bitmap& b : bitmaps_) n += b.byte_size();
  return n;
}

SmashMatrix assemble(Index rows, Index cols, const SmashConfig& config, std::span<const Index> block_ids,
                     std::vector<double> nza) {
  config.validate();
  const Layout layout = Layout::of(rows, cols, config);
  const auto lengths = bitmap_lengths(layout, config);
  std::vector<Bitmap> bitmaps;
  bitmaps.reserve(lengths.size());
  for (std::uint64_t n : lengths) bitmaps.emplace_back(n);
  for (Index id : block_ids) {
    if (id >= lengths[0]) throw CorruptionError("block id past the end of Bitmap-0");
    Index at = id;
    bitmaps[0].set(at);
    for (std::size_t i = 1; i < lengths.size(); ++i) {
      at /= config.comp[i];
      bitmaps[i].set(at);
    }
  }
  return SmashMatrix(rows, cols, config, std::move(bitmaps), std::move(nza));
}

namespace {

struct Placed {
  Index position;
  double value;
};

SmashMatrix encode_positions(Index rows, Index cols, const SmashConfig& config, std::vector<Placed> placed,
                             OpCounters* counters) {
  std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) { return a.position < b.position; });
  const std::uint32_t c0 = config.comp[0];
  std::vector<Index> ids;
  std::vector<double> nza;
  // Step 1 and 2: find nonzero blocks and append them contiguously.
  for (const Placed& p : placed) {
    const Index id = p.position / c0;
    if (ids.empty() || ids.back() != id) {
      ids.push_back(id);
      nza.resize(nza.size() + c0, 0.0);
    }
    nza[(ids.size() - 1) * c0 + p.position % c0] = p.value;
  }
  if (counters) {
    counters->add_value_ops(placed.size(), Phase::convert);
    // Step 3: one bit set per block and level.
    counters->add_index_ops(ids.size() * config.levels(), Phase::convert);
  }
  return assemble(rows, cols, config, ids, std::move(nza));
}

}  // namespace

SmashMatrix encode(const CoordinateMatrix& m, const SmashConfig& config) {
  config.validate();
  const Layout layout = Layout::of(m.rows(), m.cols(), config);
  std::vector<Placed> placed;
  placed.reserve(m.nnz());
  for (const Entry& e : m.entries()) placed.push_back({layout.position(e.row, e.col), e.value});
  return encode_positions(m.rows(), m.cols(), config, std::move(placed), nullptr);
}

SmashMatrix encode(const CsrMatrix& a, const SmashConfig& config, OpCounters* counters) {
  config.validate();
  const Layout layout = Layout::of(a.rows, a.cols, config);
  std::vector<Placed> placed;
  placed.reserve(a.nnz());
  for (Index i = 0; i < a.rows; ++i) {
    for (std::uint32_t j = a.row_ptr[i]; j < a.row_ptr[i + 1]; ++j) {
      placed.push_back({layout.position(i, a.col_ind[j]), a.values[j]});
    }
  }
  if (counters) counters->add_index_ops(a.row_ptr.size() + a.col_ind.size(), Phase::convert);
  return encode_positions(a.rows, a.cols, config, std::move(placed), counters);
}

CoordinateMatrix decode(const SmashMatrix& s) {
  std::vector<Entry> entries;
  BlockCursor cursor(s);
  while (auto block = cursor.next()) {
    for (std::size_t e = 0; e < block->values.size(); ++e) {
      const double v = block->values[e];
      if (v == 0.0) continue;
      auto rc = s.layout().coordinates(block->start + e);
      if (!rc) throw CorruptionError("nonzero value in padding");
      entries.push_back({rc->first, rc->second, v});
    }
  }
  return CoordinateMatrix(s.rows(), s.cols(), std::move(entries));
}

Index linear_index(const SmashConfig& config, std::span<const Index> path, std::uint64_t top_bits) {
  const std::size_t levels = config.levels();
  if (path.size() != levels) throw ArgumentError("path length does not match the number of levels");
  Index index = 0;
  Index span = 1;
  for (std::size_t i = 0; i < levels; ++i) {
    const std::uint64_t bound = i + 1 < levels ? config.comp[i + 1] : top_bits;
    if (path[i] >= bound) {
      throw ArgumentError("local index " + std::to_string(path[i]) + " out of range at Bitmap-" +
                          std::to_string(i));
    }
    span *= config.comp[i];
    index += path[i] * span;
  }
  return index;
}

BlockCursor::BlockCursor(const SmashMatrix& s)
    : s_(&s),
      next_bit_(s.levels(), 0),
      end_bit_(s.levels(), 0),
      found_bit_(s.levels(), 0),
      local_path_(s.levels(), 0) {
  done_ = s.levels() == 0;
}

std::optional<BlockRef> BlockCursor::next() {
  if (done_) return std::nullopt;
  const std::size_t top = s_->levels() - 1;
  const auto& comp = s_->config().comp;
  if (!started_) {
    started_ = true;
    level_ = top;
    next_bit_[top] = 0;
    end_bit_[top] = s_->top_bitmap().size();
  } else {
    level_ = 0;
  }
  while (true) {
    const std::uint64_t bit = s_->bitmap(level_).find_next(next_bit_[level_], end_bit_[level_]);
    if (bit < end_bit_[level_]) {
      next_bit_[level_] = bit + 1;
      found_bit_[level_] = bit;
      if (level_ == 0) {
        for (std::size_t i = 0; i <= top; ++i) {
          local_path_[i] = i < top ? found_bit_[i] - found_bit_[i + 1] * comp[i + 1] : found_bit_[i];
        }
        const Index start = linear_index(s_->config(), local_path_, s_->top_bitmap().size());
        return BlockRef{start, s_->block(ordinal_++)};
      }
      const std::size_t child = level_ - 1;
      next_bit_[child] = bit * comp[level_];
      end_bit_[child] = next_bit_[child] + comp[level_];
      level_ = child;
    } else if (level_ == top) {
      done_ = true;
      return std::nullopt;
    } else {
      ++level_;
    }
  }
}

std::vector<BlockRef> enumerate_blocks(const SmashMatrix& s) {
  std::vector<BlockRef> out;
  out.reserve(s.block_count());
  BlockCursor cursor(s);
  while (auto b = cursor.next()) out.push_back(*b);
  return out;
}

std::uint64_t storage_bytes(const SmashMatrix& s) { return s.nza_bytes() + s.bitmap_bytes(); }

double total_compression_ratio(const SmashMatrix& s) {
  return static_cast<double>(s.rows()) * static_cast<double>(s.cols()) * 8.0 /
         static_cast<double>(storage_bytes(s));
}

}  // namespace smash
