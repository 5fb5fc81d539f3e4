#include <algorithm>
#include <bit>

#include "smash/error.hpp"
#include "smash/kernels.hpp"

namespace smash {

namespace {

void check_inner(Index a_cols, Index b_rows) {
  if (a_cols != b_rows) {
    throw DimensionError("inner dimensions differ: " + std::to_string(a_cols) + " vs " + std::to_string(b_rows));
  }
}

MatrixResult spmm_merge(const CsrMatrix& a, const CscMatrix& b, bool ideal) {
  check_inner(a.cols, b.rows);
  MatrixResult r{{}, {}, ideal ? Backend::csr_ideal : Backend::csr};
  std::vector<Entry> out;
  std::uint64_t index_ops = 0;
  std::uint64_t matches = 0;
  for (Index i = 0; i < a.rows; ++i) {
    const std::uint32_t pa_end = a.row_ptr[i + 1];
    for (Index j = 0; j < b.cols; ++j) {
      const std::uint32_t pb_end = b.col_ptr[j + 1];
      std::uint32_t pa = a.row_ptr[i];
      std::uint32_t pb = b.col_ptr[j];
      index_ops += 4;
      index_ops += (pa < pa_end) + (pb < pb_end);
      double sum = 0.0;
      bool touched = false;
      while (pa < pa_end && pb < pb_end) {
        ++index_ops;
        const std::uint32_t ka = a.col_ind[pa];
        const std::uint32_t kb = b.row_ind[pb];
        if (ka == kb) {
          sum += a.values[pa] * b.values[pb];
          touched = true;
          ++matches;
          ++pa;
          ++pb;
          index_ops += (pa < pa_end) + (pb < pb_end);
        } else if (ka < kb) {
          ++pa;
          index_ops += pa < pa_end;
        } else {
          ++pb;
          index_ops += pb < pb_end;
        }
      }
      if (touched && sum != 0.0) out.push_back({i, j, sum});
    }
  }
  r.output = CoordinateMatrix(a.rows, b.cols, std::move(out));
  r.counters.add_value_ops(matches);
  if (!ideal) {
    r.counters.add_index_ops(index_ops);
    r.counters.add_mem_loads(2 * matches);
  }
  return r;
}

// Prefix count of NZA blocks before each bitmap segment of `bytes_per_segment`.
std::vector<std::uint64_t> segment_block_offsets(const SmashMatrix& s, std::uint64_t bytes_per_segment,
                                                 Index segments) {
  std::vector<std::uint64_t> offsets(segments + 1, 0);
  const auto bytes = s.bitmap(0).bytes();
  for (Index k = 0; k < segments; ++k) {
    std::uint64_t n = 0;
    for (std::uint64_t b = k * bytes_per_segment; b < (k + 1) * bytes_per_segment; ++b) {
      n += static_cast<std::uint64_t>(std::popcount(bytes[b]));
    }
    offsets[k + 1] = offsets[k] + n;
  }
  return offsets;
}

void check_spmm_operand(const SmashMatrix& s, Orientation expected, const char* name) {
  const SmashConfig& c = s.config();
  if (c.levels() != 1 || c.orientation != expected || !c.segment_aligned) {
    throw ConfigError(std::string("SpMM operand ") + name + " must be a single-level, segment-aligned, " +
                      (expected == Orientation::row_major ? "row-major" : "column-major") + " encoding");
  }
}

}  // namespace

CoordinateMatrix spmm_dense(const CoordinateMatrix& a, const CoordinateMatrix& b) {
  check_inner(a.cols(), b.rows());
  const auto da = to_dense(a);
  const auto db = to_dense(b);
  std::vector<double> c(a.rows() * b.cols(), 0.0);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      const double v = da[i * a.cols() + k];
      if (v == 0.0) continue;
      for (Index j = 0; j < b.cols(); ++j) c[i * b.cols() + j] += v * db[k * b.cols() + j];
    }
  }
  return from_dense(a.rows(), b.cols(), c);
}

MatrixResult spmm_csr(const CsrMatrix& a, const CscMatrix& b) { return spmm_merge(a, b, false); }

MatrixResult spmm_csr_ideal(const CsrMatrix& a, const CscMatrix& b) { return spmm_merge(a, b, true); }

SmashMatrix encode_spmm_lhs(const CoordinateMatrix& a, std::uint32_t comp0) {
  return encode(a, SmashConfig{{comp0}, Orientation::row_major, true});
}

SmashMatrix encode_spmm_rhs(const CoordinateMatrix& b, std::uint32_t comp0) {
  return encode(b, SmashConfig{{comp0}, Orientation::column_major, true});
}

MatrixResult spmm_smash_bmu(Bmu& bmu, const SmashMatrix& a, const SmashMatrix& b, SpmmOptions options,
                            SpmmStats* stats) {
  check_spmm_operand(a, Orientation::row_major, "A");
  check_spmm_operand(b, Orientation::column_major, "B");
  if (a.config().comp[0] != b.config().comp[0]) {
    throw ConfigError("SpMM operands need the same Bitmap-0 ratio, got " + std::to_string(a.config().comp[0]) +
                      " and " + std::to_string(b.config().comp[0]));
  }
  check_inner(a.cols(), b.rows());
  const std::size_t ga = options.group_a;
  const std::size_t gb = options.group_b;
  if (ga == gb) throw ArgumentError("SpMM needs two distinct BMU groups");

  MatrixResult r{{}, {}, Backend::smash_bmu};
  SpmmStats local;
  const Index inner = a.cols();
  const std::uint32_t c0 = a.config().comp[0];
  const Index stride = a.layout().stride;  // equals b.layout().stride
  if (a.rows() == 0 || b.cols() == 0 || inner == 0) {
    r.output = CoordinateMatrix(a.rows(), b.cols());
    return r;
  }
  const std::uint64_t segment_bytes = stride / c0 / 8;
  const auto a_offsets = segment_block_offsets(a, segment_bytes, a.rows());
  const auto b_offsets = segment_block_offsets(b, segment_bytes, b.cols());
  r.counters.add_index_ops(a.rows() + b.cols());

  const OpCounters before = bmu.group(ga).counters() + bmu.group(gb).counters();
  const auto bits_a = a.bitmap(0).bytes();
  const auto bits_b = b.bitmap(0).bytes();

  bmu.matinfo(ga, a.rows(), stride);
  bmu.matinfo(gb, b.cols(), stride);  // column-major B: the group sees B transposed
  bmu.bmapinfo(ga, c0, 0);
  bmu.bmapinfo(gb, c0, 0);

  std::vector<Entry> out;
  std::uint64_t value_ops = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    bool row_empty = false;
    for (Index j = 0; j < b.cols() && !row_empty; ++j) {
      ++local.lanes;
      bmu.rdbmap(ga, 0, bits_a, i * segment_bytes);
      bmu.rdbmap(gb, 0, bits_b, j * segment_bytes);
      ScanStatus sa = bmu.pbmap(ga);
      ScanStatus sb = bmu.pbmap(gb);
      std::uint64_t ka_ord = a_offsets[i];
      std::uint64_t kb_ord = b_offsets[j];
      double sum = 0.0;
      bool touched = false;
      bool first = true;
      while (true) {
        IndexPair pa{}, pb{};
        if (sa == ScanStatus::found) pa = bmu.rdind(ga);
        if (sb == ScanStatus::found) pb = bmu.rdind(gb);
        const bool a_in = sa == ScanStatus::found && pa.row == i;
        const bool b_in = sb == ScanStatus::found && pb.row == j;
        if (first && !a_in) row_empty = true;
        first = false;
        if (a_in && b_in) {
          ++local.probes;
          r.counters.add_index_ops(1);
          if (pa.col == pb.col) {
            ++local.matches;
            const auto va = a.block(ka_ord);
            const auto vb = b.block(kb_ord);
            for (std::uint32_t e = 0; e < c0 && pa.col + e < inner; ++e) {
              sum += va[e] * vb[e];
              ++value_ops;
            }
            touched = true;
            sa = bmu.pbmap(ga);
            sb = bmu.pbmap(gb);
            ++ka_ord;
            ++kb_ord;
          } else if (pa.col < pb.col) {
            sa = bmu.pbmap(ga);
            ++ka_ord;
          } else {
            sb = bmu.pbmap(gb);
            ++kb_ord;
          }
          continue;
        }
        if (options.early_exit) break;
        // Drain both streams to the end of their bitmaps; nothing else can match.
        if (sa == ScanStatus::found) {
          sa = bmu.pbmap(ga);
        } else if (sb == ScanStatus::found) {
          sb = bmu.pbmap(gb);
        } else {
          break;
        }
      }
      if (touched && sum != 0.0) out.push_back({i, j, sum});
    }
  }
  r.output = CoordinateMatrix(a.rows(), b.cols(), std::move(out));
  r.counters.add_value_ops(value_ops);
  r.counters += (bmu.group(ga).counters() + bmu.group(gb).counters()).since(before);
  if (stats) *stats = local;
  return r;
}

}  // namespace smash
