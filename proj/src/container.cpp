#include "smash/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>

#include "smash/error.hpp"

namespace smash {

namespace {

constexpr std::uint8_t kAlignedFlag = 0x80;
constexpr char kMagic[4] = {'S', 'M', 'S', 'H'};

class Writer {
 public:
  template <class T>
  void put(T v) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void put_f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void put_bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::vector<std::uint8_t> get_bytes(std::uint64_t n) {
    need(n);
    std::vector<std::uint8_t> b(in_.begin() + pos_, in_.begin() + pos_ + n);
    pos_ += n;
    return b;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > in_.size() - pos_) throw CorruptionError("container truncated");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const SmashMatrix& s) {
  constexpr auto limit = std::numeric_limits<std::uint32_t>::max();
  if (s.rows() > limit || s.cols() > limit) throw DimensionError("container dimensions are 32-bit");
  Writer w;
  for (char c : kMagic) w.put(static_cast<std::uint8_t>(c));
  w.put(kContainerVersion);
  std::uint8_t orientation = static_cast<std::uint8_t>(s.config().orientation);
  if (s.config().segment_aligned) orientation |= kAlignedFlag;
  w.put(orientation);
  w.put(static_cast<std::uint8_t>(s.levels()));
  w.put(static_cast<std::uint32_t>(s.rows()));
  w.put(static_cast<std::uint32_t>(s.cols()));
  for (std::uint32_t c : s.config().comp) w.put(c);
  w.put(static_cast<std::uint64_t>(s.block_count()));
  for (std::size_t i = s.levels(); i-- > 0;) {
    w.put(static_cast<std::uint64_t>(s.bitmap(i).byte_size()));
    w.put_bytes(s.bitmap(i).bytes());
  }
  for (double v : s.nza()) w.put_f64(v);
  return w.take();
}

SmashMatrix deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) throw CorruptionError("bad magic");
  }
  const auto version = r.get<std::uint16_t>();
  if (version != kContainerVersion) throw CorruptionError("unsupported container version " + std::to_string(version));
  const auto orientation = r.get<std::uint8_t>();
  const auto levels = r.get<std::uint8_t>();
  if ((orientation & ~kAlignedFlag) > 1) throw CorruptionError("bad orientation byte");
  if (levels < 1 || levels > kMaxLevels) throw CorruptionError("bad level count");

  SmashConfig config;
  config.orientation = static_cast<Orientation>(orientation & ~kAlignedFlag);
  config.segment_aligned = (orientation & kAlignedFlag) != 0;
  const Index rows = r.get<std::uint32_t>();
  const Index cols = r.get<std::uint32_t>();
  config.comp.resize(levels);
  for (auto& c : config.comp) c = r.get<std::uint32_t>();
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw CorruptionError(e.what());
  }
  const auto block_count = r.get<std::uint64_t>();

  const auto lengths = bitmap_lengths(Layout::of(rows, cols, config), config);
  std::vector<Bitmap> bitmaps(levels);
  for (std::size_t i = levels; i-- > 0;) {
    const auto n = r.get<std::uint64_t>();
    if (n != (lengths[i] + 7) / 8) throw CorruptionError("Bitmap-" + std::to_string(i) + " byte length mismatch");
    bitmaps[i] = Bitmap(lengths[i], r.get_bytes(n));
  }
  if (block_count > r.remaining() / 8 / config.comp[0] || r.remaining() != block_count * config.comp[0] * 8) {
    throw CorruptionError("NZA length mismatch");
  }
  std::vector<double> nza(block_count * config.comp[0]);
  for (double& v : nza) v = r.get_f64();
  return SmashMatrix(rows, cols, std::move(config), std::move(bitmaps), std::move(nza));
}

void write_container(std::ostream& out, const SmashMatrix& s) {
  const auto bytes = serialize(s);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

SmashMatrix read_container(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

void write_container_file(const std::string& path, const SmashMatrix& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  write_container(out, s);
}

SmashMatrix read_container_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return read_container(in);
}

}  // namespace smash
