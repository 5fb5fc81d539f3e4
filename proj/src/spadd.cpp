#include <algorithm>

#include "smash/error.hpp"
#include "smash/kernels.hpp"

namespace smash {

namespace {

void check_same_shape(Index ar, Index ac, Index br, Index bc) {
  if (ar != br || ac != bc) {
    throw DimensionError("SpAdd operands differ in shape: " + std::to_string(ar) + "x" + std::to_string(ac) +
                         " vs " + std::to_string(br) + "x" + std::to_string(bc));
  }
}

}  // namespace

CoordinateMatrix spadd_dense(const CoordinateMatrix& a, const CoordinateMatrix& b) {
  check_same_shape(a.rows(), a.cols(), b.rows(), b.cols());
  auto c = to_dense(a);
  const auto db = to_dense(b);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += db[i];
  return from_dense(a.rows(), a.cols(), c);
}

MatrixResult spadd_csr(const CsrMatrix& a, const CsrMatrix& b) {
  check_same_shape(a.rows, a.cols, b.rows, b.cols);
  MatrixResult r{{}, {}, Backend::csr};
  std::vector<Entry> out;
  std::uint64_t index_ops = 0;
  std::uint64_t adds = 0;
  for (Index i = 0; i < a.rows; ++i) {
    std::uint32_t pa = a.row_ptr[i], pa_end = a.row_ptr[i + 1];
    std::uint32_t pb = b.row_ptr[i], pb_end = b.row_ptr[i + 1];
    index_ops += 4;
    while (pa < pa_end || pb < pb_end) {
      ++index_ops;
      const Index ka = pa < pa_end ? a.col_ind[pa] : a.cols;
      const Index kb = pb < pb_end ? b.col_ind[pb] : b.cols;
      if (ka == kb) {
        out.push_back({i, ka, a.values[pa++] + b.values[pb++]});
        ++adds;
      } else if (ka < kb) {
        out.push_back({i, ka, a.values[pa++]});
      } else {
        out.push_back({i, kb, b.values[pb++]});
      }
    }
  }
  r.counters.add_index_ops(index_ops);
  r.counters.add_value_ops(adds);
  r.output = CoordinateMatrix(a.rows, a.cols, std::move(out));
  return r;
}

KernelResult<SmashMatrix> spadd_smash_encoded(const SmashMatrix& a, const SmashMatrix& b) {
  check_same_shape(a.rows(), a.cols(), b.rows(), b.cols());
  if (!(a.config() == b.config())) throw ConfigError("SpAdd operands must share one bitmap configuration");
  KernelResult<SmashMatrix> r{{}, {}, Backend::smash_sw};
  const std::uint32_t c0 = a.config().comp[0];

  // Word-wise OR of every level.
  for (std::size_t lvl = 0; lvl < a.levels(); ++lvl) r.counters.add_index_ops((a.bitmap(lvl).byte_size() + 7) / 8);

  const auto ba = enumerate_blocks(a);
  const auto bb = enumerate_blocks(b);
  std::vector<Index> ids;
  std::vector<double> nza;
  std::vector<double> block(c0);
  auto emit = [&](Index start, std::span<const double> values) {
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return;
    ids.push_back(start / c0);
    nza.insert(nza.end(), values.begin(), values.end());
  };
  std::size_t i = 0, j = 0;
  while (i < ba.size() || j < bb.size()) {
    r.counters.add_index_ops(1);
    if (j == bb.size() || (i < ba.size() && ba[i].start < bb[j].start)) {
      emit(ba[i].start, ba[i].values);
      ++i;
    } else if (i == ba.size() || bb[j].start < ba[i].start) {
      emit(bb[j].start, bb[j].values);
      ++j;
    } else {
      for (std::uint32_t e = 0; e < c0; ++e) block[e] = ba[i].values[e] + bb[j].values[e];
      r.counters.add_value_ops(c0);
      emit(ba[i].start, block);
      ++i;
      ++j;
    }
  }
  r.output = assemble(a.rows(), a.cols(), a.config(), ids, std::move(nza));
  return r;
}

MatrixResult spadd_smash(const SmashMatrix& a, const SmashMatrix& b) {
  auto r = spadd_smash_encoded(a, b);
  return {decode(r.output), r.counters, r.backend};
}

}  // namespace smash
