// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "smash/bmu.hpp"
#include "smash/container.hpp"
#include "smash/error.hpp"
#include "smash/formats.hpp"
#include "smash/generate.hpp"
#include "smash/graph.hpp"
#include "smash/kernels.hpp"
#include "smash/smash_matrix.hpp"
#include "smash/stats.hpp"
#include "support/oracle.hpp"
#include "support/suite.hpp"

using namespace smash;

namespace {

constexpr std::size_t kSuiteSize = 1000;
constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Shared random suite: matrix/config pairs plus SpMM and SpAdd partners.
struct Sample {
  suite::Case c;
  CoordinateMatrix spmm_rhs;
  CoordinateMatrix spadd_rhs;
  std::vector<double> x;
};

const std::vector<Sample>& samples() {
  static const std::vector<Sample> all = [] {
    std::vector<Sample> out;
    for (const auto& c : suite::make_suite(kSuiteSize, 1)) {
      Sample s;
      s.c = c;
      std::mt19937_64 rng(c.seed + 424242);
      const Index k = std::uniform_int_distribution<Index>(1, 128)(rng);
      const double density = std::uniform_real_distribution<double>(0.0005, 0.10)(rng);
      s.spmm_rhs = generate_synthetic(c.m.cols(), k, static_cast<Index>(std::llround(density * double(c.m.cols() * k))),
                                      c.seed + 1);
      // Same shape; every third entry of A is cancelled exactly.
      const auto other = generate_synthetic(c.m.rows(), c.m.cols(), c.m.nnz(), c.seed + 2);
      std::vector<Entry> e;
      std::set<std::pair<Index, Index>> cancelled;
      for (std::size_t i = 0; i < c.m.nnz(); i += 3) {
        const auto& a = c.m.entries()[i];
        e.push_back({a.row, a.col, -a.value});
        cancelled.insert({a.row, a.col});
      }
      for (const auto& b : other.entries())
        if (!cancelled.count({b.row, b.col})) e.push_back(b);
      s.spadd_rhs = CoordinateMatrix(c.m.rows(), c.m.cols(), e);
      s.x = suite::random_vector(c.m.cols(), c.seed);
      out.push_back(std::move(s));
    }
    return out;
  }();
  return all;
}

double rel_error(std::span<const double> got, std::span<const double> want) {
  if (got.size() != want.size()) return INFINITY;
  double scale = 0.0, err = 0.0;
  for (double w : want) scale = std::max(scale, std::abs(w));
  if (scale == 0.0) scale = 1.0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]) / scale);
  return err;
}

double rel_error(const CoordinateMatrix& got, const oracle::Grid& want) {
  if (got.rows() != want.rows || got.cols() != want.cols) return INFINITY;
  return rel_error(oracle::grid(got).v, want.v);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// 1. Every SpMV/SpMM/SpAdd backend against the dense oracle.
Outcome oracle_equivalence() {
  double worst_spmv = 0, worst_spmm = 0;
  std::size_t spadd_mismatch = 0, runs = 0;
  for (const auto& s : samples()) {
    const auto& m = s.c.m;
    const auto csr = to_csr(m);
    const auto enc = encode(m, s.c.config);
    const auto want = oracle::matvec(m, s.x);
    Bmu bmu;
    for (const auto& got : {spmv_dense(m, s.x), spmv_csr(csr, s.x).output, spmv_csr_ideal(csr, s.x).output,
                            spmv_bcsr(to_bcsr(m, 2, 2), s.x).output, spmv_smash_sw(enc, s.x).output,
                            spmv_smash_bmu(bmu, s.c.seed % kBmuGroups, enc, s.x).output}) {
      worst_spmv = std::max(worst_spmv, rel_error(got, want));
      ++runs;
    }

    const auto& b = s.spmm_rhs;
    const auto prod = oracle::matmul(m, b);
    const auto csc = to_csc(b);
    const std::uint32_t c0 = s.c.config.comp[0];
    Bmu bmu2;
    for (const auto& got : {spmm_dense(m, b), spmm_csr(csr, csc).output, spmm_csr_ideal(csr, csc).output,
                            spmm_smash_bmu(bmu2, encode_spmm_lhs(m, c0), encode_spmm_rhs(b, c0)).output}) {
      worst_spmm = std::max(worst_spmm, rel_error(got, prod));
      ++runs;
    }

    const auto& d = s.spadd_rhs;
    const auto sum = oracle::add(m, d);
    for (const auto& got : {spadd_dense(m, d), spadd_csr(csr, to_csr(d)).output,
                            spadd_smash(enc, encode(d, s.c.config)).output}) {
      spadd_mismatch += !oracle::exact(got, sum);
      ++runs;
    }
  }
  Outcome o;
  o.pass = worst_spmv <= kTol && worst_spmm <= kTol && spadd_mismatch == 0;
  o.detail = std::to_string(samples().size()) + " cases, " + std::to_string(runs) + " backend runs; max rel err spmv " +
             fmt(worst_spmv) + ", spmm " + fmt(worst_spmm) + " (tol 1e-9); spadd inexact " +
             std::to_string(spadd_mismatch);
  return o;
}

// 2. decode(encode(m)) = m and byte-exact container round trips.
Outcome round_trip() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("smash_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t failures = 0, ragged = 0, checked = 0;
  for (const auto& s : samples()) {
    for (bool aligned : {false, true}) {
      auto config = s.c.config;
      config.segment_aligned = aligned;
      const auto enc = encode(s.c.m, config);
      ++checked;
      Index span = 1;
      for (auto r : config.comp) span *= r;
      const Index minor = config.orientation == Orientation::row_major ? s.c.m.cols() : s.c.m.rows();
      ragged += minor % config.comp[0] != 0 || (s.c.m.rows() * s.c.m.cols()) % span != 0;
      bool ok = decode(enc) == s.c.m;
      const auto bytes = serialize(enc);
      const auto back = deserialize(bytes);
      ok = ok && back == enc && serialize(back) == bytes;
      const auto path = (dir / "m.smsh").string();
      write_container_file(path, enc);
      ok = ok && read_container_file(path) == enc;
      failures += !ok;
    }
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = failures == 0 && ragged > 0;
  o.detail = std::to_string(checked) + " encodings (" + std::to_string(ragged) + " with non-divisible tails), " +
             std::to_string(failures) + " failures";
  return o;
}

// 3. Index formula over every depth-first set-bit path vs a linear scan of Bitmap-0.
Outcome index_formula() {
  std::size_t matrices = 0, paths = 0, mismatches = 0;
  for (const auto& s : samples()) {
    if (s.c.m.rows() > 64 || s.c.m.cols() > 64) continue;
    ++matrices;
    const auto& config = s.c.config;
    const auto h = oracle::hierarchy(s.c.m, config);
    const auto scan = oracle::block_starts(h, config.comp[0]);
    const auto all = oracle::set_bit_paths(h, config);
    const std::uint64_t top_bits = h.levels.back().size();
    std::vector<Index> via_formula;
    for (const auto& p : all) via_formula.push_back(linear_index(config, p, top_bits));
    paths += all.size();
    mismatches += via_formula != scan;

    // The library's own depth-first cursor walks the same paths.
    const auto enc = encode(s.c.m, config);
    BlockCursor cur(enc);
    std::vector<std::vector<Index>> walked;
    while (cur.next()) walked.emplace_back(cur.path().begin(), cur.path().end());
    mismatches += walked != all;
  }
  Outcome o;
  o.pass = mismatches == 0 && matrices > 0;
  o.detail = std::to_string(matrices) + " matrices <= 64x64, " + std::to_string(paths) + " paths, " +
             std::to_string(mismatches) + " mismatches";
  return o;
}

void bind(Bmu& bmu, std::size_t grp, const SmashMatrix& s) {
  bmu.matinfo(grp, s.layout().major_count(), s.layout().stride);
  for (std::size_t l = s.levels(); l-- > 0;) bmu.bmapinfo(grp, s.config().comp[l], l);
  for (std::size_t l = s.levels(); l-- > 0;) bmu.rdbmap(grp, l, s.bitmap(l).bytes());
}

std::vector<IndexPair> expected_pairs(const SmashMatrix& s) {
  std::vector<IndexPair> out;
  for (const auto& b : enumerate_blocks(s)) out.push_back({b.start / s.layout().stride, b.start % s.layout().stride});
  return out;
}

// 4. PBMAP/RDIND streams equal enumerate_blocks, across refills and interleaved groups.
Outcome bmu_trace() {
  std::size_t mismatches = 0;
  for (const auto& s : samples()) {
    const auto enc = encode(s.c.m, s.c.config);
    Bmu bmu;
    const std::size_t grp = s.c.seed % kBmuGroups;
    bind(bmu, grp, enc);
    std::vector<IndexPair> got;
    while (bmu.pbmap(grp) == ScanStatus::found) got.push_back(bmu.rdind(grp));
    mismatches += got != expected_pairs(enc);
  }

  // Bitmaps spanning several 256-byte blocks: 1 level at 256x256 is 32768 bits = 4096 bytes.
  std::uint64_t min_refills = UINT64_MAX;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto m = generate_synthetic(256, 256, 300 + 50 * seed, seed);
    for (auto comp : {std::vector<std::uint32_t>{2}, {2, 2}, {2, 2, 2}, {4, 2}}) {
      SmashConfig config;
      config.comp = comp;
      const auto enc = encode(m, config);
      Bmu bmu;
      bind(bmu, 0, enc);
      std::vector<IndexPair> got;
      while (bmu.pbmap(0) == ScanStatus::found) got.push_back(bmu.rdind(0));
      mismatches += got != expected_pairs(enc);
      min_refills = std::min(min_refills, bmu.group(0).counters().total().buffer_refills);
    }
  }

  // Group isolation: four matrices, one instruction per group in round robin.
  std::size_t isolation_failures = 0;
  for (std::size_t base = 0; base + kBmuGroups <= 200; base += kBmuGroups) {
    std::vector<SmashMatrix> mats;
    for (std::size_t g = 0; g < kBmuGroups; ++g) mats.push_back(encode(samples()[base + g].c.m, samples()[base + g].c.config));
    Bmu serial;
    std::vector<std::vector<IndexPair>> want(kBmuGroups);
    for (std::size_t g = 0; g < kBmuGroups; ++g) {
      bind(serial, g, mats[g]);
      while (serial.pbmap(g) == ScanStatus::found) want[g].push_back(serial.rdind(g));
    }
    Bmu mixed;
    for (std::size_t g = 0; g < kBmuGroups; ++g) bind(mixed, g, mats[g]);
    std::vector<std::vector<IndexPair>> got(kBmuGroups);
    std::vector<bool> done(kBmuGroups, false);
    for (std::size_t live = kBmuGroups; live > 0;) {
      for (std::size_t g = 0; g < kBmuGroups; ++g) {
        if (done[g]) continue;
        if (mixed.pbmap(g) == ScanStatus::found) {
          got[g].push_back(mixed.rdind(g));
        } else {
          done[g] = true;
          --live;
        }
      }
    }
    for (std::size_t g = 0; g < kBmuGroups; ++g)
      isolation_failures += got[g] != want[g] || !(mixed.group(g).counters() == serial.group(g).counters());
  }

  Outcome o;
  o.pass = mismatches == 0 && min_refills >= 3 && isolation_failures == 0;
  o.detail = std::to_string(samples().size() + 32) + " scans, " + std::to_string(mismatches) +
             " mismatches; min refills on large bitmaps " + std::to_string(min_refills) +
             " (need >= 3); interleaved groups: " + std::to_string(isolation_failures) + " failures";
  return o;
}

// 5. Ideal indexing is always cheaper than CSR; report the CSR indexing share.
Outcome counting_direction() {
  std::size_t nonempty = 0, violations = 0;
  double share_spmv = 0, share_spmm = 0, ratio_spmv = 0, ratio_spmm = 0, worst_ratio = 0;
  for (const auto& s : samples()) {
    if (s.c.m.empty()) continue;
    ++nonempty;
    const auto csr = to_csr(s.c.m);
    const auto base_v = spmv_csr(csr, s.x).counters.total();
    const auto ideal_v = spmv_csr_ideal(csr, s.x).counters.total();
    const auto csc = to_csc(s.spmm_rhs);
    const auto base_m = spmm_csr(csr, csc).counters.total();
    const auto ideal_m = spmm_csr_ideal(csr, csc).counters.total();
    violations += !(ideal_v.instr_total() < base_v.instr_total());
    violations += !(ideal_m.instr_total() < base_m.instr_total());
    share_spmv += double(base_v.index_ops) / double(base_v.instr_total());
    share_spmm += double(base_m.index_ops) / double(base_m.instr_total());
    const double rv = double(ideal_v.instr_total()) / double(base_v.instr_total());
    const double rm = double(ideal_m.instr_total()) / double(base_m.instr_total());
    ratio_spmv += rv;
    ratio_spmm += rm;
    worst_ratio = std::max({worst_ratio, rv, rm});
  }
  const double n = double(nonempty);
  Outcome o;
  o.pass = violations == 0 && share_spmv > 0 && share_spmm > 0 && worst_ratio < 1.0;
  o.detail = std::to_string(nonempty) + " nonempty; mean CSR indexing share spmv " + fmt(share_spmv / n) + ", spmm " +
             fmt(share_spmm / n) + "; mean ideal/csr spmv " + fmt(ratio_spmv / n) + " (speedup " +
             fmt(n / ratio_spmv) + "x), spmm " + fmt(ratio_spmm / n) + "; worst ratio " + fmt(worst_ratio) +
             "; violations " + std::to_string(violations);
  return o;
}

// 6. Storage arithmetic on M* and the density trend against CSR.
Outcome storage_arithmetic() {
  const CoordinateMatrix m_star(4, 4, {{0, 0, 1}, {0, 1, 2}, {2, 2, 3}, {3, 3, 4}});
  SmashConfig c24;
  c24.comp = {2, 4};
  const double smash_ratio = total_compression_ratio(encode(m_star, c24));
  const double csr_ratio = total_compression_ratio(to_csr(m_star));
  const bool m_ok = storage_bytes(encode(m_star, c24)) == 50 && smash_ratio == 2.56 &&
                    storage_bytes(to_csr(m_star)) == 68 && csr_ratio == 128.0 / 68.0 &&
                    std::abs(csr_ratio - 1.88) < 0.005;

  const std::vector<std::vector<std::uint32_t>> hierarchies{{2}, {2, 4}, {2, 4, 4}, {2, 8, 8}};
  std::size_t dense_cases = 0, dense_fail = 0, sparse_cases = 0, sparse_fail = 0;
  double min_dense_margin = INFINITY, min_sparse_margin = INFINITY;
  for (Index n : {32, 64, 128}) {
    for (double sparsity : {0.02, 0.05, 0.10}) {
      for (double target : {0.75, 1.0}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
          const auto nnz = static_cast<Index>(std::ceil(sparsity * double(n * n)));
          const auto m = generate_with_locality(n, n, nnz, 2, target, seed);
          const auto st = compute_stats(m, 2);
          if (st.sparsity < 0.02 || *st.locality_of_sparsity < 0.75) ++dense_fail;
          const double csr = total_compression_ratio(to_csr(m));
          for (const auto& comp : hierarchies) {
            SmashConfig config;
            config.comp = comp;
            const double smash = total_compression_ratio(encode(m, config));
            ++dense_cases;
            dense_fail += !(smash >= csr);
            min_dense_margin = std::min(min_dense_margin, smash / csr);
          }
        }
      }
    }
  }
  for (Index n : {256, 512, 1024}) {
    for (double sparsity : {0.0005, 0.001}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto nnz = static_cast<Index>(std::floor(sparsity * double(n * n)));
        const auto m = generate_with_locality(n, n, nnz, 2, 0.5, seed);
        const auto st = compute_stats(m, 2);
        if (st.sparsity > 0.001 || *st.locality_of_sparsity != 0.5) ++sparse_fail;
        const double csr = total_compression_ratio(to_csr(m));
        for (const auto& comp : hierarchies) {
          SmashConfig config;
          config.comp = comp;
          const double smash = total_compression_ratio(encode(m, config));
          ++sparse_cases;
          sparse_fail += !(csr >= smash);
          min_sparse_margin = std::min(min_sparse_margin, csr / smash);
        }
      }
    }
  }
  Outcome o;
  o.pass = m_ok && dense_fail == 0 && sparse_fail == 0;
  o.detail = "M* smash " + fmt(smash_ratio) + " (50 B), csr " + fmt(csr_ratio) + " (68 B); dense/local: smash >= csr in " +
             std::to_string(dense_cases - dense_fail) + "/" + std::to_string(dense_cases) + " (min smash/csr " +
             fmt(min_dense_margin) + "); very sparse: csr >= smash in " + std::to_string(sparse_cases - sparse_fail) +
             "/" + std::to_string(sparse_cases) + " (min csr/smash " + fmt(min_sparse_margin) + ")";
  return o;
}

// 7. Raising comp0 adds zero-padding work and shrinks the bitmaps.
Outcome ratio_sensitivity() {
  std::size_t value_fail = 0, bitmap_fail = 0;
  std::uint64_t value_2 = 0, value_8 = 0, bitmap_2 = 0, bitmap_8 = 0;
  for (const auto& s : samples()) {
    std::uint64_t prev_sw = 0, prev_hw = 0, prev_bits = UINT64_MAX;
    for (std::uint32_t c0 : {2u, 4u, 8u}) {
      auto config = s.c.config;
      config.comp[0] = c0;
      const auto enc = encode(s.c.m, config);
      const auto sw = spmv_smash_sw(enc, s.x).counters.total().value_ops;
      Bmu bmu;
      const auto hw = spmv_smash_bmu(bmu, 0, enc, s.x).counters.total().value_ops;
      value_fail += sw < prev_sw || hw < prev_hw || sw != hw;
      bitmap_fail += enc.bitmap_bytes() > prev_bits;
      prev_sw = sw;
      prev_hw = hw;
      prev_bits = enc.bitmap_bytes();
      if (c0 == 2) {
        value_2 += sw;
        bitmap_2 += enc.bitmap_bytes();
      }
      if (c0 == 8) {
        value_8 += sw;
        bitmap_8 += enc.bitmap_bytes();
      }
    }
  }
  Outcome o;
  o.pass = value_fail == 0 && bitmap_fail == 0;
  o.detail = std::to_string(samples().size()) + " matrices x comp0 {2,4,8}; value_ops total " + std::to_string(value_2) +
             " -> " + std::to_string(value_8) + ", bitmap bytes " + std::to_string(bitmap_2) + " -> " +
             std::to_string(bitmap_8) + "; monotonicity violations value " + std::to_string(value_fail) +
             ", bitmap " + std::to_string(bitmap_fail);
  return o;
}

using Edges = std::vector<std::pair<Index, Index>>;

// 8. PageRank mass and ring uniformity; BC across backends and against Brandes.
Outcome graph_correctness() {
  std::size_t sum_fail = 0, ring_fail = 0, pr_runs = 0;
  for (Index n : {3, 10, 64, 255}) {
    Edges e;
    for (Index v = 0; v < n; ++v) e.push_back({v, (v + 1) % n});
    const auto ring = Graph::from_edges(n, e);
    for (Backend b : {Backend::csr, Backend::smash_sw, Backend::smash_bmu}) {
      const auto r = pagerank(ring, 0.85, 30, b);
      for (double v : r.ranks) ring_fail += std::abs(v - 1.0 / double(n)) > 1e-12;
      for (double sum : r.iteration_sums) sum_fail += std::abs(sum - 1.0) > 1e-9;
    }
  }
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 40; ++i) {
    const Index n = std::uniform_int_distribution<Index>(2, 256)(rng);
    Edges e;
    for (Index k = 0; k < 2 * n; ++k) e.push_back({rng() % n, rng() % n});
    std::erase_if(e, [](auto p) { return p.first == p.second; });
    const auto g = Graph::from_edges(n, e, i % 2 == 0);
    for (Backend b : {Backend::csr, Backend::smash_sw, Backend::smash_bmu}) {
      ++pr_runs;
      for (double sum : pagerank(g, 0.85, 20, b).iteration_sums) sum_fail += std::abs(sum - 1.0) > 1e-9;
    }
  }

  std::size_t graphs = 0, backend_diff = 0, oracle_fail = 0;
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const Index n = std::uniform_int_distribution<Index>(2, 256)(rng);
    const bool undirected = i % 2 == 1;
    const double degree = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
    Edges e;
    for (Index k = 0; k < static_cast<Index>(degree * double(n)); ++k) e.push_back({rng() % n, rng() % n});
    std::erase_if(e, [](auto p) { return p.first == p.second; });
    const auto g = Graph::from_edges(n, e, undirected);
    std::vector<std::set<Index>> adj(n);
    for (auto [u, v] : e) {
      adj[u].insert(v);
      if (undirected) adj[v].insert(u);
    }
    std::vector<std::vector<Index>> out(n);
    for (Index v = 0; v < n; ++v) out[v].assign(adj[v].begin(), adj[v].end());
    const auto want = oracle::brandes(n, out, undirected);
    const auto csr = betweenness_centrality(g, Backend::csr);
    const auto hw = betweenness_centrality(g, Backend::smash_bmu);
    ++graphs;
    backend_diff += csr.scores != hw.scores;
    const double err = rel_error(csr.scores, want);
    worst = std::max(worst, err);
    oracle_fail += err > kTol;
  }
  Outcome o;
  o.pass = sum_fail == 0 && ring_fail == 0 && backend_diff == 0 && oracle_fail == 0;
  o.detail = "pagerank: " + std::to_string(pr_runs + 12) + " runs, " + std::to_string(sum_fail) +
             " iterations off unit mass, ring deviations > 1e-12: " + std::to_string(ring_fail) + "; bc: " +
             std::to_string(graphs) + " graphs, csr != smash-bmu in " + std::to_string(backend_diff) +
             ", max rel err vs Brandes " + fmt(worst);
  return o;
}

// 9. Hardware and configuration limits are enforced.
Outcome constraints() {
  auto throws = [](auto&& fn, auto tag) {
    try {
      fn();
    } catch (const decltype(tag)&) {
      return true;
    } catch (...) {
      return false;
    }
    return false;
  };
  Bmu bmu;
  bmu.matinfo(0, 4, 4);
  const bool ratio_rejected = throws([&] { bmu.bmapinfo(0, 4096, 0); }, BmuFault(""));
  bool ratio_accepted = true;
  try {
    bmu.bmapinfo(0, 2048, 0);
  } catch (...) {
    ratio_accepted = false;
  }
  SmashConfig deep;
  deep.comp = {2, 2, 2, 2};
  const bool levels_rejected = throws([&] { deep.validate(); }, ConfigError(""));
  const CoordinateMatrix m(4, 4, {{0, 0, 1}, {3, 3, 2}});
  const bool comp_rejected =
      throws([&] { spmm_smash_bmu(bmu, encode_spmm_lhs(m, 2), encode_spmm_rhs(m, 4)); }, ConfigError(""));
  Outcome o;
  o.pass = ratio_rejected && ratio_accepted && levels_rejected && comp_rejected;
  o.detail = std::string("bmapinfo 4096 ") + (ratio_rejected ? "rejected" : "ACCEPTED") + ", 2048 " +
             (ratio_accepted ? "accepted" : "REJECTED") + "; 4-level config " +
             (levels_rejected ? "rejected" : "ACCEPTED") + "; spmm comp0 2 vs 4 " +
             (comp_rejected ? "rejected" : "ACCEPTED");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "encoding round trip", 30, round_trip},
      {3, "index formula equivalence", 0, index_formula},
      {4, "BMU trace equivalence", 0, bmu_trace},
      {5, "counting-model direction", 0, counting_direction},
      {6, "storage arithmetic", 30, storage_arithmetic},
      {7, "compression-ratio sensitivity", 0, ratio_sensitivity},
      {8, "graph correctness", 60, graph_correctness},
      {9, "constraint enforcement", 0, constraints},
  };

  // Build the shared suite up front so its cost is not charged to one criterion.
  const auto t_suite = std::chrono::steady_clock::now();
  samples();
  const double suite_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_suite).count();
  std::cout << "random suite: " << samples().size() << " cases built in " << fmt(suite_s) << " s\n";

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << o.detail << " | " << fmt(secs)
              << " s";
    if (c.limit_s > 0) std::cout << " (limit " << c.limit_s << " s" << (in_time ? "" : ", EXCEEDED") << ")";
    std::cout << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed\n" : std::to_string(failed) + " criteria failed\n");
  return failed;
}
