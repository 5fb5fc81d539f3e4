#include <sstream>

#include "doctest.h"
#include "smash/bmu.hpp"
#include "smash/error.hpp"
#include "smash/formats.hpp"
#include "smash/kernels.hpp"
#include "smash/stats.hpp"
#include "support/oracle.hpp"
#include "support/suite.hpp"

using namespace smash;

namespace {

CoordinateMatrix m_star() { return CoordinateMatrix(4, 4, {{0, 0, 1}, {0, 1, 2}, {2, 2, 3}, {3, 3, 4}}); }

SmashConfig cfg(std::vector<std::uint32_t> comp) {
  SmashConfig c;
  c.comp = std::move(comp);
  return c;
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("backend names") {
  for (Backend b : {Backend::dense, Backend::csr, Backend::csr_ideal, Backend::smash_sw, Backend::smash_bmu,
                    Backend::bcsr})
    CHECK(parse_backend(to_string(b)) == b);
  CHECK(to_string(Backend::csr_ideal) == "csr-ideal");
  CHECK_FALSE(parse_backend("coo").has_value());
}

TEST_CASE("spmv on M*") {
  const std::vector<double> x{1, 1, 1, 1};
  const std::vector<double> want{3, 0, 3, 4};
  CHECK(spmv_dense(m_star(), x) == want);

  const auto csr = spmv_csr(to_csr(m_star()), x);
  CHECK(csr.output == want);
  CHECK(csr.counters.total().value_ops == 4);
  CHECK(csr.counters.total().mem_loads == 4);
  CHECK(csr.backend == Backend::csr);

  const auto ideal = spmv_csr_ideal(to_csr(m_star()), x);
  CHECK(ideal.output == csr.output);
  CHECK(ideal.counters.total().index_ops == 0);
  CHECK(ideal.counters.total().value_ops == 4);
  CHECK(ideal.counters.total().instr_total() == 4);

  const auto s = encode(m_star(), cfg({2, 4}));
  const auto sw = spmv_smash_sw(s, x);
  CHECK(sw.output == want);
  CHECK(sw.counters.total().value_ops == 6);

  Bmu bmu;
  std::ostringstream trace;
  bmu.set_trace(&trace);
  const auto hw = spmv_smash_bmu(bmu, 0, s, x);
  CHECK(hw.output == want);
  CHECK(hw.counters.total().value_ops == 6);
  CHECK(count_lines(trace.str(), "PBMAP") == 4);
  CHECK(count_lines(trace.str(), "BMAPINFO") == 2);
  CHECK(count_lines(trace.str(), "RDBMAP") == 2);
  CHECK(hw.counters.total().index_ops < csr.counters.total().index_ops);
  CHECK(hw.counters.total().instr_total() < csr.counters.total().instr_total());

  CHECK(spmv_bcsr(to_bcsr(m_star(), 2, 2), x).output == want);
}

TEST_CASE("spmv trivial cases") {
  const std::vector<double> x{1, 2, 3};
  CHECK(spmv_dense(identity(3), x) == x);
  CHECK(spmv_csr(to_csr(identity(3)), x).output == x);

  const CoordinateMatrix zero(3, 3);
  const std::vector<double> z(3, 0.0);
  CHECK(spmv_dense(zero, x) == z);
  const auto csr = spmv_csr(to_csr(zero), x);
  CHECK(csr.output == z);
  CHECK(csr.counters.total().value_ops == 0);
  const auto s = encode(zero, cfg({2, 2}));
  const auto sw = spmv_smash_sw(s, x);
  CHECK(sw.output == z);
  CHECK(sw.counters.total().value_ops == 0);
  Bmu bmu;
  std::ostringstream trace;
  bmu.set_trace(&trace);
  CHECK(spmv_smash_bmu(bmu, 0, s, x).output == z);
  CHECK(count_lines(trace.str(), "PBMAP") == 1);
  CHECK(trace.str().find("PBMAP 0 -> exhausted") != std::string::npos);
}

TEST_CASE("spmv dimension errors") {
  const std::vector<double> x{1, 2};
  CHECK_THROWS_AS(spmv_dense(m_star(), x), DimensionError);
  CHECK_THROWS_AS(spmv_csr(to_csr(m_star()), x), DimensionError);
  CHECK_THROWS_AS(spmv_smash_sw(encode(m_star(), cfg({2})), x), DimensionError);
  Bmu bmu;
  CHECK_THROWS_AS(spmv_smash_bmu(bmu, 0, encode(m_star(), cfg({2})), x), DimensionError);
  CHECK_THROWS_AS(spmv_smash_bmu(bmu, 9, encode(m_star(), cfg({2})), std::vector<double>(4, 1.0)), BmuFault);
}

TEST_CASE("boolean semiring") {
  const CoordinateMatrix m(3, 3, {{0, 1, 5}, {1, 2, -2}, {2, 0, 1}});
  const std::vector<double> x{0, 1, 0};
  const std::vector<double> want{1, 0, 0};
  CHECK(spmv_dense(m, x, Semiring::boolean) == want);
  CHECK(spmv_csr(to_csr(m), x, Semiring::boolean).output == want);
  CHECK(spmv_smash_sw(encode(m, cfg({2})), x, Semiring::boolean).output == want);
  Bmu bmu;
  CHECK(spmv_smash_bmu(bmu, 1, encode(m, cfg({4, 2})), x, Semiring::boolean).output == want);
  CHECK(spmv_bcsr(to_bcsr(m, 2, 2), x, Semiring::boolean).output == want);
}

TEST_CASE("spmv backends agree with the oracle") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto c = suite::make_case(seed);
    const auto x = suite::random_vector(c.m.cols(), seed);
    const auto want = oracle::matvec(c.m, x);
    const auto csr = to_csr(c.m);
    const auto s = encode(c.m, c.config);
    REQUIRE(oracle::close(spmv_dense(c.m, x), want));
    REQUIRE(oracle::close(spmv_csr(csr, x).output, want));
    REQUIRE(spmv_csr_ideal(csr, x).output == spmv_csr(csr, x).output);
    REQUIRE(oracle::close(spmv_bcsr(to_bcsr(c.m, 2, 2), x).output, want));
    REQUIRE(oracle::close(spmv_smash_sw(s, x).output, want));
    Bmu bmu;
    REQUIRE(oracle::close(spmv_smash_bmu(bmu, seed % 4, s, x).output, want));
  }
}

TEST_CASE("spmv engine reuses its prepared matrix") {
  const auto c = suite::make_case(5);
  const auto x = suite::random_vector(c.m.cols(), 5);
  const auto want = oracle::matvec(c.m, x);
  for (Backend b : {Backend::dense, Backend::csr, Backend::csr_ideal, Backend::smash_sw, Backend::smash_bmu,
                    Backend::bcsr}) {
    SpmvEngine e(c.m, b, c.config);
    CHECK(e.backend() == b);
    CHECK(e.rows() == c.m.rows());
    const auto first = e.apply(x);
    const auto second = e.apply(x);
    CHECK(oracle::close(first.output, want));
    CHECK(first.output == second.output);
    CHECK(first.counters == second.counters);
  }
}

TEST_CASE("counting separation") {
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto c = suite::make_case(seed);
    if (c.m.empty()) continue;
    const auto x = suite::random_vector(c.m.cols(), seed);
    const auto csr = to_csr(c.m);
    const auto base = spmv_csr(csr, x).counters.total();
    const auto ideal = spmv_csr_ideal(csr, x).counters.total();
    REQUIRE(ideal.index_ops == 0);
    REQUIRE(base.index_ops > 0);
    REQUIRE(ideal.instr_total() < base.instr_total());

    auto config = c.config;
    config.orientation = Orientation::row_major;
    const double locality = *compute_stats(c.m, config.comp[0]).locality_of_sparsity;
    if (locality < 0.5) continue;
    Bmu bmu;
    const auto hw = spmv_smash_bmu(bmu, 0, encode(c.m, config), x).counters.total();
    ++checked;
    // bmu <= 4 nnz + 2 + 2L and csr = 4 nnz + 2 rows, so the fixed BMU preamble
    // can only be outweighed when rows <= levels + 1.
    const auto preamble = static_cast<std::int64_t>(2 + 2 * config.levels());
    const auto gap = static_cast<std::int64_t>(hw.instr_total()) - static_cast<std::int64_t>(base.instr_total());
    REQUIRE(gap <= preamble - 2 * static_cast<std::int64_t>(c.m.rows()));
    if (gap >= 0) {
      ++violations;
      MESSAGE("seed " << seed << ": " << c.m.rows() << "x" << c.m.cols() << " nnz " << c.m.nnz() << " levels "
                      << config.levels() << " comp0 " << config.comp[0] << " bmu " << hw.instr_total() << " csr "
                      << base.instr_total());
      REQUIRE(c.m.rows() <= config.levels() + 1);
    }
  }
  MESSAGE(checked << " matrices at locality >= 0.5, " << violations << " with bmu >= csr (all with rows <= levels + 1)");
  CHECK(checked > 0);
}

TEST_CASE("spmm examples") {
  const auto a = m_star();
  const CoordinateMatrix want(4, 4, {{0, 0, 1}, {0, 1, 2}, {2, 2, 9}, {3, 3, 16}});
  CHECK(spmm_dense(a, a) == want);
  CHECK(spmm_csr(to_csr(a), to_csc(a)).output == want);
  CHECK(spmm_csr_ideal(to_csr(a), to_csc(a)).output == want);
  Bmu bmu;
  SpmmStats stats;
  CHECK(spmm_smash_bmu(bmu, encode_spmm_lhs(a, 2), encode_spmm_rhs(a, 2), {}, &stats).output == want);
  // Block-level matches: (2,3) and (3,2) pair blocks whose products are zero.
  CHECK(stats.matches == 6);

  const CoordinateMatrix b(2, 2, {{0, 0, 3}, {0, 1, -1}, {1, 1, 7}});
  CHECK(spmm_csr(to_csr(identity(2)), to_csc(b)).output == b);
  Bmu bmu2;
  CHECK(spmm_smash_bmu(bmu2, encode_spmm_lhs(identity(2), 4), encode_spmm_rhs(b, 4)).output == b);
}

TEST_CASE("spmm matched pairs only") {
  // Row 0 of A and column 0 of B share indices 0 and 1 only.
  const CoordinateMatrix a(1, 4, {{0, 0, 1}, {0, 1, 2}, {0, 3, 3}});
  const CoordinateMatrix b(4, 1, {{0, 0, 4}, {1, 0, 5}, {2, 0, 6}});
  const auto r = spmm_csr(to_csr(a), to_csc(b));
  CHECK(r.output.at(0, 0) == 14);
  CHECK(r.counters.total().value_ops == 2);
  CHECK(spmm_csr_ideal(to_csr(a), to_csc(b)).counters.total().instr_total() == 2);
}

TEST_CASE("spmm rejects mismatched inputs") {
  Bmu bmu;
  CHECK_THROWS_AS(spmm_smash_bmu(bmu, encode_spmm_lhs(m_star(), 2), encode_spmm_rhs(m_star(), 4)), ConfigError);
  CHECK_THROWS_AS(spmm_smash_bmu(bmu, encode(m_star(), cfg({2})), encode_spmm_rhs(m_star(), 2)), ConfigError);
  CHECK_THROWS_AS(spmm_smash_bmu(bmu, encode_spmm_lhs(m_star(), 2), encode_spmm_lhs(m_star(), 2)), ConfigError);
  CHECK_THROWS_AS(spmm_csr(to_csr(CoordinateMatrix(2, 3)), to_csc(CoordinateMatrix(2, 3))), DimensionError);
  CHECK_THROWS_AS(spmm_smash_bmu(bmu, encode_spmm_lhs(CoordinateMatrix(2, 3), 2),
                                 encode_spmm_rhs(CoordinateMatrix(2, 3), 2)),
                  DimensionError);
}

TEST_CASE("spmm backends agree and early exit is transparent") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto c = suite::make_case(seed, {48, 0.0005, 0.10});
    const auto other = suite::make_case(seed + 9000, {48, 0.0005, 0.10});
    std::vector<Entry> eb;
    for (const auto& x : other.m.entries())
      if (x.row < c.m.cols()) eb.push_back(x);
    const CoordinateMatrix b(c.m.cols(), other.m.cols(), eb);
    const auto want = oracle::matmul(c.m, b);
    REQUIRE(oracle::close(spmm_dense(c.m, b), want));
    REQUIRE(oracle::close(spmm_csr(to_csr(c.m), to_csc(b)).output, want));
    REQUIRE(oracle::close(spmm_csr_ideal(to_csr(c.m), to_csc(b)).output, want));
    const std::uint32_t c0 = c.config.comp[0];
    const auto sa = encode_spmm_lhs(c.m, c0);
    const auto sb = encode_spmm_rhs(b, c0);
    Bmu bmu;
    SpmmStats fast;
    const auto r = spmm_smash_bmu(bmu, sa, sb, {}, &fast);
    REQUIRE(oracle::close(r.output, want));
    Bmu bmu2;
    SpmmStats slow;
    const auto full = spmm_smash_bmu(bmu2, sa, sb, {false, 2, 3}, &slow);
    REQUIRE(full.output == r.output);
    REQUIRE(fast.probes <= slow.probes);
    // Merge bound: probes never exceed the set bits of both segments, summed over lanes.
    REQUIRE(fast.probes <= b.cols() * sa.block_count() + c.m.rows() * sb.block_count() + 2 * fast.lanes);
  }
}

TEST_CASE("spadd examples") {
  const auto a = m_star();
  const CoordinateMatrix doubled(4, 4, {{0, 0, 2}, {0, 1, 4}, {2, 2, 6}, {3, 3, 8}});
  CHECK(spadd_dense(a, a) == doubled);
  CHECK(spadd_csr(to_csr(a), to_csr(a)).output == doubled);
  CHECK(spadd_smash(encode(a, cfg({2, 4})), encode(a, cfg({2, 4}))).output == doubled);

  const CoordinateMatrix zero(4, 4);
  CHECK(spadd_csr(to_csr(a), to_csr(zero)).output == a);
  CHECK(spadd_smash(encode(a, cfg({2})), encode(zero, cfg({2}))).output == a);

  CHECK(spadd_csr(to_csr(a), to_csr(a.negated())).output.empty());
  const auto cancel = spadd_smash_encoded(encode(a, cfg({2, 4})), encode(a.negated(), cfg({2, 4})));
  CHECK(cancel.output.block_count() == 0);
  CHECK(cancel.output.top_bitmap().popcount() == 0);

  CHECK_THROWS_AS(spadd_smash(encode(a, cfg({2})), encode(a, cfg({4}))), ConfigError);
  CHECK_THROWS_AS(spadd_csr(to_csr(a), to_csr(CoordinateMatrix(4, 5))), DimensionError);
  CHECK_THROWS_AS(spadd_dense(a, CoordinateMatrix(3, 4)), DimensionError);
}

TEST_CASE("spadd backends are exact and bitmaps are ORed") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto c = suite::make_case(seed);
    auto b = generate_synthetic(c.m.rows(), c.m.cols(), c.m.nnz(), seed + 77);
    // Force some exact cancellations.
    std::vector<Entry> e(b.entries().begin(), b.entries().end());
    for (std::size_t i = 0; i < c.m.nnz(); i += 3) e.push_back({c.m.entries()[i].row, c.m.entries()[i].col, 0});
    std::sort(e.begin(), e.end(), [](const Entry& x, const Entry& y) {
      return std::pair(x.row, x.col) < std::pair(y.row, y.col);
    });
    std::vector<Entry> merged;
    for (const auto& x : e) {
      if (!merged.empty() && merged.back().row == x.row && merged.back().col == x.col) continue;
      merged.push_back(x);
    }
    for (auto& x : merged)
      if (x.value == 0) x.value = -c.m.at(x.row, x.col);
    b = CoordinateMatrix(c.m.rows(), c.m.cols(), merged);

    const auto want = oracle::add(c.m, b);
    REQUIRE(oracle::exact(spadd_dense(c.m, b), want));
    REQUIRE(oracle::exact(spadd_csr(to_csr(c.m), to_csr(b)).output, want));
    const auto sa = encode(c.m, c.config);
    const auto sb = encode(b, c.config);
    const auto sum = spadd_smash_encoded(sa, sb);
    REQUIRE(oracle::exact(decode(sum.output), want));
    const auto reencoded = encode(decode(sum.output), c.config);
    REQUIRE(sum.output == reencoded);
    // Every surviving bit came from A or B.
    for (std::size_t l = 0; l < sa.levels(); ++l)
      for (std::uint64_t bit = 0; bit < sa.bitmap(l).size(); ++bit)
        if (sum.output.bitmap(l).test(bit)) REQUIRE((sa.bitmap(l).test(bit) || sb.bitmap(l).test(bit)));
  }
}

TEST_CASE("spadd without cancellation keeps the exact bitmap OR") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto c = suite::make_case(seed);
    std::vector<Entry> e(c.m.entries().begin(), c.m.entries().end());
    for (auto& x : e) x.value = std::abs(x.value);
    const CoordinateMatrix a(c.m.rows(), c.m.cols(), e);
    const auto b = generate_synthetic(a.rows(), a.cols(), a.nnz() / 2, seed + 3);
    std::vector<Entry> eb(b.entries().begin(), b.entries().end());
    for (auto& x : eb) x.value = std::abs(x.value);
    const CoordinateMatrix bp(a.rows(), a.cols(), eb);
    const auto sa = encode(a, c.config);
    const auto sb = encode(bp, c.config);
    const auto sum = spadd_smash_encoded(sa, sb).output;
    for (std::size_t l = 0; l < sa.levels(); ++l)
      for (std::uint64_t bit = 0; bit < sa.bitmap(l).size(); ++bit)
        REQUIRE(sum.bitmap(l).test(bit) == (sa.bitmap(l).test(bit) || sb.bitmap(l).test(bit)));
  }
}
