#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "smash/container.hpp"
#include "smash/error.hpp"
#include "smash/generate.hpp"
#include "smash/graph.hpp"
#include "smash/matrix_market.hpp"
#include "smash/stats.hpp"

namespace smash::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr double kRelTol = 1e-9;

struct Options {
  std::string in;
  std::string out;
  std::string rhs;
  std::string comp;
  std::string orientation = "row";
  std::string backends;
  std::string format = "csv";
  std::string synthetic;
  int levels = 0;
  std::uint32_t upper = 4;
  std::uint32_t comp0 = 2;
  std::uint64_t seed = 1;
  Index bcsr_block = 2;
  double damping = 0.85;
  std::size_t iterations = 20;
  bool undirected = false;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string comp_label(const SmashConfig& c) {
  std::string s;
  for (std::size_t i = 0; i < c.comp.size(); ++i) {
    if (i) s += '/';
    s += std::to_string(c.comp[i]);
  }
  return s;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

Orientation parse_orientation(const std::string& s) {
  if (s == "row" || s == "row-major") return Orientation::row_major;
  if (s == "col" || s == "column" || s == "column-major") return Orientation::column_major;
  throw ArgumentError("orientation must be 'row' or 'col', got '" + s + "'");
}

SmashConfig make_config(const Options& o) {
  SmashConfig c;
  c.orientation = parse_orientation(o.orientation);
  if (!o.comp.empty()) {
    const CompSpec spec = parse_comp(o.comp);
    if (spec.sweep) throw ArgumentError("a ratio sweep is only valid for 'bench'");
    c.comp = spec.values;
    if (o.levels != 0 && static_cast<std::size_t>(o.levels) != c.comp.size()) {
      throw ArgumentError("--levels " + std::to_string(o.levels) + " does not match " +
                          std::to_string(c.comp.size()) + " ratios in --comp");
    }
  } else {
    c.comp.assign(o.levels == 0 ? 1 : static_cast<std::size_t>(o.levels), 2);
  }
  c.validate();
  return c;
}

std::vector<Backend> parse_backends(const std::string& list, std::vector<Backend> fallback) {
  if (list.empty()) return fallback;
  std::vector<Backend> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = parse_backend(item);
    if (!b) throw ArgumentError("unknown backend '" + item + "'");
    out.push_back(*b);
  }
  return out;
}

bool close_vectors(std::span<const double> got, std::span<const double> want) {
  if (got.size() != want.size()) return false;
  double scale = 0.0;
  for (double v : want) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (std::abs(got[i] - want[i]) > kRelTol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

bool close_matrices(const CoordinateMatrix& got, const CoordinateMatrix& want) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return false;
  return close_vectors(to_dense(got), to_dense(want));
}

std::string matrix_id(const std::string& path) { return fs::path(path).stem().string(); }

// Parses "R,C,NNZ".
CoordinateMatrix synthetic_matrix(const std::string& spec, std::uint64_t seed, std::string& id) {
  std::vector<Index> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoull(item));
  if (v.size() != 3) throw ArgumentError("--synthetic expects rows,cols,nnz");
  id = "synthetic-" + std::to_string(v[0]) + "x" + std::to_string(v[1]) + "-" + std::to_string(v[2]) + "-s" +
       std::to_string(seed);
  return generate_synthetic(v[0], v[1], v[2], seed);
}

std::size_t worker_count(std::size_t items) {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SMASH_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, items));
}

// Runs fn(i) for i in [0, n) on up to worker_count(n) threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::string> list_matrices(const std::string& in) {
  std::vector<std::string> files;
  if (fs::is_directory(in)) {
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_regular_file() && entry.path().extension() == ".mtx") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(in);
  }
  if (files.empty()) throw ArgumentError("no .mtx files under '" + in + "'");
  return files;
}

json record_json(const BenchRecord& r) {
  return json{{"workload", r.workload},
              {"matrix", r.matrix},
              {"backend", r.backend},
              {"levels", r.config.levels()},
              {"comp", r.config.comp},
              {"orientation", r.config.orientation == Orientation::row_major ? "row" : "col"},
              {"segment_aligned", r.config.segment_aligned},
              {"bcsr_block", r.bcsr_block},
              {"seed", r.seed},
              {"index_ops", r.counts.index_ops},
              {"value_ops", r.counts.value_ops},
              {"mem_loads", r.counts.mem_loads},
              {"mem_block_loads", r.counts.mem_block_loads},
              {"buffer_refills", r.counts.buffer_refills},
              {"instr_total", r.counts.instr_total()},
              {"storage_bytes", r.storage_bytes},
              {"compression_ratio", r.compression_ratio},
              {"wall_ms", r.wall_ms},
              {"conversion_fraction", r.conversion_fraction},
              {"verified", r.verified}};
}

// Storage of `m` in a backend's format.
std::uint64_t backend_storage(const CoordinateMatrix& m, Backend b, const SmashConfig& config, Index bcsr_block) {
  switch (b) {
    case Backend::dense: return m.rows() * m.cols() * 8;
    case Backend::csr:
    case Backend::csr_ideal: return storage_bytes(to_csr(m));
    case Backend::bcsr: return storage_bytes(to_bcsr(m, bcsr_block, bcsr_block));
    case Backend::smash_sw:
    case Backend::smash_bmu: return storage_bytes(encode(m, config));
  }
  return 0;
}

class Runner {
 public:
  Runner(const Options& o, SmashConfig config) : o_(o), config_(std::move(config)) {}

  std::vector<BenchRecord> spmv(const CoordinateMatrix& m, const std::string& id, const std::vector<Backend>& backends) {
    const auto x = generate_vector(m.cols(), o_.seed);
    const auto want = spmv_dense(m, x);
    const CsrMatrix csr = to_csr(m);
    std::vector<BenchRecord> out;
    for (Backend b : backends) {
      BenchRecord r = blank("spmv", id, b, config_);
      double convert_ms = 0.0;
      const auto t0 = Clock::now();
      SpmvResult res;
      switch (b) {
        case Backend::dense:
          res.output = spmv_dense(m, x);
          res.counters.add_value_ops(m.rows() * m.cols());
          break;
        case Backend::csr: res = spmv_csr(csr, x); break;
        case Backend::csr_ideal: res = spmv_csr_ideal(csr, x); break;
        case Backend::bcsr: {
          const auto tc = Clock::now();
          const BcsrMatrix a = to_bcsr(m, o_.bcsr_block, o_.bcsr_block);
          convert_ms = ms_since(tc);
          res = spmv_bcsr(a, x);
          break;
        }
        case Backend::smash_sw:
        case Backend::smash_bmu: {
          const auto tc = Clock::now();
          const SmashMatrix s = encode(csr, config_);
          convert_ms = ms_since(tc);
          if (b == Backend::smash_sw) {
            res = spmv_smash_sw(s, x);
          } else {
            Bmu bmu;
            res = spmv_smash_bmu(bmu, 0, s, x);
          }
          break;
        }
      }
      finish(r, t0, convert_ms, res.counters);
      r.storage_bytes = backend_storage(m, b, config_, o_.bcsr_block);
      r.compression_ratio = ratio(m, r.storage_bytes);
      r.verified = close_vectors(res.output, want);
      out.push_back(r);
    }
    return out;
  }

  std::vector<BenchRecord> spmm(const CoordinateMatrix& a, const CoordinateMatrix& bm, const std::string& id,
                                const std::vector<Backend>& backends) {
    const auto want = spmm_dense(a, bm);
    const CsrMatrix csr = to_csr(a);
    const CscMatrix csc = to_csc(bm);
    std::vector<BenchRecord> out;
    for (Backend b : backends) {
      SmashConfig cfg = config_;
      if (b == Backend::smash_bmu) cfg = SmashConfig{{config_.comp[0]}, Orientation::row_major, true};
      BenchRecord r = blank("spmm", id, b, cfg);
      double convert_ms = 0.0;
      const auto t0 = Clock::now();
      MatrixResult res;
      switch (b) {
        case Backend::dense:
          res.output = spmm_dense(a, bm);
          res.counters.add_value_ops(a.rows() * a.cols() * bm.cols());
          break;
        case Backend::csr: res = spmm_csr(csr, csc); break;
        case Backend::csr_ideal: res = spmm_csr_ideal(csr, csc); break;
        case Backend::smash_bmu: {
          const auto tc = Clock::now();
          const SmashMatrix sa = encode_spmm_lhs(a, cfg.comp[0]);
          const SmashMatrix sb = encode_spmm_rhs(bm, cfg.comp[0]);
          convert_ms = ms_since(tc);
          Bmu bmu;
          res = spmm_smash_bmu(bmu, sa, sb);
          r.storage_bytes = storage_bytes(sa);
          break;
        }
        default: throw ArgumentError("backend '" + std::string(to_string(b)) + "' does not implement spmm");
      }
      finish(r, t0, convert_ms, res.counters);
      if (b != Backend::smash_bmu) r.storage_bytes = backend_storage(a, b, cfg, o_.bcsr_block);
      r.compression_ratio = ratio(a, r.storage_bytes);
      r.verified = close_matrices(res.output, want);
      out.push_back(r);
    }
    return out;
  }

  std::vector<BenchRecord> spadd(const CoordinateMatrix& a, const CoordinateMatrix& bm, const std::string& id,
                                 const std::vector<Backend>& backends) {
    const auto want = spadd_dense(a, bm);
    const CsrMatrix ca = to_csr(a);
    const CsrMatrix cb = to_csr(bm);
    std::vector<BenchRecord> out;
    for (Backend b : backends) {
      BenchRecord r = blank("spadd", id, b, config_);
      double convert_ms = 0.0;
      const auto t0 = Clock::now();
      MatrixResult res;
      switch (b) {
        case Backend::dense: res.output = spadd_dense(a, bm); break;
        case Backend::csr: res = spadd_csr(ca, cb); break;
        case Backend::smash_sw: {
          const auto tc = Clock::now();
          const SmashMatrix sa = encode(ca, config_);
          const SmashMatrix sb = encode(cb, config_);
          convert_ms = ms_since(tc);
          res = spadd_smash(sa, sb);
          break;
        }
        default: throw ArgumentError("backend '" + std::string(to_string(b)) + "' does not implement spadd");
      }
      finish(r, t0, convert_ms, res.counters);
      r.storage_bytes = backend_storage(a, b, config_, o_.bcsr_block);
      r.compression_ratio = ratio(a, r.storage_bytes);
      r.verified = res.output == want;
      out.push_back(r);
    }
    return out;
  }

  std::vector<BenchRecord> pagerank(const Graph& g, const std::string& id, const std::vector<Backend>& backends,
                                    DenseVector* ranks_out) {
    const auto want = smash::pagerank(g, o_.damping, o_.iterations, Backend::dense);
    std::vector<BenchRecord> out;
    for (Backend b : backends) {
      BenchRecord r = blank("pagerank", id, b, config_);
      const double convert_ms = conversion_ms(g.adjacency, b);
      const auto t0 = Clock::now();
      const auto res = smash::pagerank(g, o_.damping, o_.iterations, b, config_);
      finish(r, t0, 0.0, res.counters);
      r.conversion_fraction = r.wall_ms > 0 ? std::clamp(convert_ms / r.wall_ms, 0.0, 1.0) : 0.0;
      r.storage_bytes = backend_storage(g.adjacency, b, config_, o_.bcsr_block);
      r.compression_ratio = ratio(g.adjacency, r.storage_bytes);
      bool sums_ok = std::all_of(res.iteration_sums.begin(), res.iteration_sums.end(),
                                 [](double s) { return std::abs(s - 1.0) <= kRelTol; });
      r.verified = sums_ok && close_vectors(res.ranks, want.ranks);
      if (ranks_out && ranks_out->empty()) *ranks_out = res.ranks;
      out.push_back(r);
    }
    return out;
  }

  std::vector<BenchRecord> bc(const Graph& g, const std::string& id, const std::vector<Backend>& backends,
                              DenseVector* scores_out) {
    const auto want = betweenness_centrality(g, Backend::dense);
    std::vector<BenchRecord> out;
    for (Backend b : backends) {
      BenchRecord r = blank("bc", id, b, config_);
      const double convert_ms = 2 * conversion_ms(g.adjacency, b);
      const auto t0 = Clock::now();
      const auto res = betweenness_centrality(g, b, config_);
      finish(r, t0, 0.0, res.counters);
      r.conversion_fraction = r.wall_ms > 0 ? std::clamp(convert_ms / r.wall_ms, 0.0, 1.0) : 0.0;
      r.storage_bytes = backend_storage(g.adjacency, b, config_, o_.bcsr_block);
      r.compression_ratio = ratio(g.adjacency, r.storage_bytes);
      r.verified = close_vectors(res.scores, want.scores);
      if (scores_out && scores_out->empty()) *scores_out = res.scores;
      out.push_back(r);
    }
    return out;
  }

 private:
  BenchRecord blank(const char* workload, const std::string& id, Backend b, const SmashConfig& cfg) const {
    BenchRecord r;
    r.workload = workload;
    r.matrix = id;
    r.backend = std::string(to_string(b));
    r.config = cfg;
    r.bcsr_block = o_.bcsr_block;
    r.seed = o_.seed;
    return r;
  }

  static void finish(BenchRecord& r, Clock::time_point t0, double convert_ms, const OpCounters& counters) {
    r.wall_ms = ms_since(t0);
    r.conversion_fraction = r.wall_ms > 0 ? std::clamp(convert_ms / r.wall_ms, 0.0, 1.0) : 0.0;
    // Kernel work only; conversion is reported through the time fraction.
    r.counts = counters.phase(Phase::index) + counters.phase(Phase::compute);
  }

  static double ratio(const CoordinateMatrix& m, std::uint64_t bytes) {
    return bytes == 0 ? 0.0 : static_cast<double>(m.rows()) * static_cast<double>(m.cols()) * 8.0 / bytes;
  }

  double conversion_ms(const CoordinateMatrix& m, Backend b) const {
    const CsrMatrix csr = to_csr(m);
    const auto t0 = Clock::now();
    if (b == Backend::smash_sw || b == Backend::smash_bmu) {
      (void)encode(csr, config_);
    } else if (b == Backend::bcsr) {
      (void)to_bcsr(m, o_.bcsr_block, o_.bcsr_block);
    } else {
      return 0.0;
    }
    return ms_since(t0);
  }

  const Options& o_;
  SmashConfig config_;
};

void emit_records(const std::vector<BenchRecord>& records, const Options& o, const std::vector<std::string>& args,
                  std::ostream& out) {
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
    out << arr.dump(2) << '\n';
  } else {
    out << csv_header() << '\n';
    for (const auto& r : records) out << to_csv(r) << '\n';
  }
  if (o.out.empty()) return;

  std::ofstream csv(o.out);
  if (!csv) throw ArgumentError("cannot write '" + o.out + "'");
  csv << csv_header() << '\n';
  for (const auto& r : records) csv << to_csv(r) << '\n';

  json meta{{"tool", "smash"},
            {"container_version", kContainerVersion},
            {"command", args},
            {"seed", o.seed},
            {"bcsr_block", {o.bcsr_block, o.bcsr_block}},
            {"bcsr_block_note", "BCSR block shape chosen by this tool, not taken from any reference setup"},
            {"columns", csv_header()},
            {"records", records.size()}};
  std::ofstream sidecar(o.out + ".json");
  sidecar << meta.dump(2) << '\n';
}

bool all_verified(const std::vector<BenchRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const BenchRecord& r) { return r.verified; });
}

void write_vector(const std::string& path, std::span<const double> v) {
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot write '" + path + "'");
  f << std::setprecision(17);
  for (double x : v) f << x << '\n';
}

CoordinateMatrix load_any(const std::string& path) {
  if (fs::path(path).extension() == ".smsh") return decode(read_container_file(path));
  return load_matrix_market_file(path);
}

}  // namespace

std::string csv_header() {
  return "workload,matrix,backend,levels,comp,orientation,segment_aligned,bcsr_block,seed,index_ops,value_ops,"
         "mem_loads,mem_block_loads,buffer_refills,instr_total,storage_bytes,compression_ratio,wall_ms,"
         "conversion_fraction,verified";
}

std::string to_csv(const BenchRecord& r) {
  std::ostringstream os;
  os << r.workload << ',' << r.matrix << ',' << r.backend << ',' << r.config.levels() << ',' << comp_label(r.config)
     << ',' << (r.config.orientation == Orientation::row_major ? "row" : "col") << ','
     << (r.config.segment_aligned ? 1 : 0) << ',' << r.bcsr_block << 'x' << r.bcsr_block << ',' << r.seed << ','
     << r.counts.index_ops << ',' << r.counts.value_ops << ',' << r.counts.mem_loads << ','
     << r.counts.mem_block_loads << ',' << r.counts.buffer_refills << ',' << r.counts.instr_total() << ','
     << r.storage_bytes << ',' << fmt_double(r.compression_ratio) << ',' << fmt_double(r.wall_ms) << ','
     << fmt_double(r.conversion_fraction) << ',' << (r.verified ? 1 : 0);
  return os.str();
}

CompSpec parse_comp(const std::string& text) {
  CompSpec spec;
  std::string body = text;
  const std::string suffix = "-sweep";
  if (body.size() >= suffix.size() && body.compare(body.size() - suffix.size(), suffix.size(), suffix) == 0) {
    spec.sweep = true;
    body.resize(body.size() - suffix.size());
  }
  auto number = [&](const std::string& s) -> std::uint32_t {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || v > UINT32_MAX) throw ArgumentError("bad ratio '" + s + "' in '" + text + "'");
    return static_cast<std::uint32_t>(v);
  };
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      spec.values.push_back(number(item));
      continue;
    }
    const std::uint32_t lo = number(item.substr(0, dots));
    const std::uint32_t hi = number(item.substr(dots + 2));
    if (!std::has_single_bit(lo) || lo > hi) throw ArgumentError("bad ratio range '" + item + "'");
    for (std::uint64_t v = lo; v <= hi; v *= 2) spec.values.push_back(static_cast<std::uint32_t>(v));
  }
  if (spec.values.empty()) throw ArgumentError("empty ratio list");
  return spec;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"smash: hierarchical-bitmap sparse matrix toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* c) {
    c->add_option("--levels", o.levels, "Bitmap hierarchy levels (1-3)");
    c->add_option("--comp", o.comp, "Per-level compression ratios, e.g. 2,4");
    c->add_option("--orientation", o.orientation, "row or col");
  };
  auto add_run = [&](CLI::App* c) {
    add_config(c);
    c->add_option("--backends", o.backends, "Comma-separated backends");
    c->add_option("--seed", o.seed, "Seed for generated vectors and matrices");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--bcsr-block", o.bcsr_block, "BCSR square block size")->check(CLI::PositiveNumber);
  };

  auto* convert = app.add_subcommand("convert", "Encode a Matrix Market file (or decode a container)");
  convert->add_option("--in", o.in)->required();
  convert->add_option("--out", o.out)->required();
  add_config(convert);

  auto* stats = app.add_subcommand("stats", "Sparsity, locality and storage of a matrix or container");
  stats->add_option("file,--in", o.in)->required();
  add_config(stats);
  stats->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* spmv = app.add_subcommand("spmv", "Sparse matrix-vector product in each backend");
  spmv->add_option("--in", o.in)->required();
  spmv->add_option("--out", o.out, "CSV report path (a .json sidecar is written next to it)");
  add_run(spmv);

  auto* spmm = app.add_subcommand("spmm", "Sparse matrix-matrix product; B defaults to A");
  spmm->add_option("--in", o.in)->required();
  spmm->add_option("--rhs", o.rhs);
  spmm->add_option("--out", o.out);
  add_run(spmm);

  auto* spadd = app.add_subcommand("spadd", "Sparse matrix addition; B defaults to A");
  spadd->add_option("--in", o.in)->required();
  spadd->add_option("--rhs", o.rhs);
  spadd->add_option("--out", o.out);
  add_run(spadd);

  auto* pr = app.add_subcommand("pagerank", "PageRank over iterative SpMV");
  pr->add_option("--in", o.in, "Matrix Market adjacency or 'u v' edge list")->required();
  pr->add_option("--out", o.out);
  pr->add_option("--damping", o.damping);
  pr->add_option("--iters", o.iterations);
  pr->add_flag("--undirected", o.undirected);
  add_run(pr);

  auto* bc = app.add_subcommand("bc", "Betweenness centrality over semiring SpMV");
  bc->add_option("--in", o.in)->required();
  bc->add_option("--out", o.out);
  bc->add_flag("--undirected", o.undirected);
  add_run(bc);

  std::string workload;
  auto* bench = app.add_subcommand("bench", "Counter report across backends and ratio sweeps");
  bench->add_option("workload", workload)->required()->check(CLI::IsMember({"spmv", "spmm", "spadd", "pagerank", "bc"}));
  bench->add_option("--in", o.in, "Matrix Market file or directory");
  bench->add_option("--synthetic", o.synthetic, "rows,cols,nnz generated from --seed");
  bench->add_option("--out", o.out);
  bench->add_option("--upper", o.upper, "Ratio of levels above Bitmap-0 during a sweep");
  bench->add_option("--damping", o.damping);
  bench->add_option("--iters", o.iterations);
  add_run(bench);

  auto* storage = app.add_subcommand("compare-storage", "SMASH vs CSR total compression ratio per matrix");
  storage->add_option("--in", o.in, "Matrix Market file or directory")->required();
  storage->add_option("--comp0", o.comp0, "Bitmap-0 ratio");
  storage->add_option("--levels", o.levels);
  storage->add_option("--upper", o.upper);
  storage->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*convert) {
      const SmashConfig config = make_config(o);
      const bool in_container = fs::path(o.in).extension() == ".smsh";
      const bool out_container = fs::path(o.out).extension() != ".mtx";
      if (in_container && !out_container) {
        const SmashMatrix s = read_container_file(o.in);
        write_matrix_market_file(o.out, decode(s));
        out << "decoded " << o.in << " -> " << o.out << '\n';
      } else if (!in_container && out_container) {
        const SmashMatrix s = encode(to_csr(load_matrix_market_file(o.in)), config);
        write_container_file(o.out, s);
        out << "encoded " << o.in << " -> " << o.out << " levels=" << s.levels() << " comp=" << comp_label(s.config())
            << " blocks=" << s.block_count() << " bytes=" << storage_bytes(s) << '\n';
      } else {
        throw ArgumentError("convert goes .mtx -> .smsh or .smsh -> .mtx");
      }
      return kExitOk;
    }

    if (*stats) {
      SmashMatrix s;
      CoordinateMatrix m;
      if (fs::path(o.in).extension() == ".smsh") {
        s = read_container_file(o.in);
        m = decode(s);
      } else {
        m = load_matrix_market_file(o.in);
        s = encode(m, make_config(o));
      }
      const SparsityStats st = compute_stats(m, s.config().comp[0]);
      const CsrMatrix csr = to_csr(m);
      json j{{"matrix", matrix_id(o.in)},
             {"rows", m.rows()},
             {"cols", m.cols()},
             {"nnz", st.nnz},
             {"sparsity", st.sparsity},
             {"locality_block", st.block_size},
             {"locality", st.locality_of_sparsity ? json(*st.locality_of_sparsity) : json("empty")},
             {"levels", s.levels()},
             {"comp", comp_label(s.config())},
             {"smash_bytes", storage_bytes(s)},
             {"smash_ratio", total_compression_ratio(s)},
             {"csr_bytes", storage_bytes(csr)},
             {"csr_ratio", total_compression_ratio(csr)}};
      if (o.format == "json") {
        out << j.dump(2) << '\n';
      } else {
        out << "matrix,rows,cols,nnz,sparsity,locality_block,locality,levels,comp,smash_bytes,smash_ratio,csr_bytes,"
               "csr_ratio\n";
        out << matrix_id(o.in) << ',' << m.rows() << ',' << m.cols() << ',' << st.nnz << ',' << fmt_double(st.sparsity)
            << ',' << st.block_size << ','
            << (st.locality_of_sparsity ? fmt_double(*st.locality_of_sparsity) : std::string("empty")) << ','
            << s.levels() << ',' << comp_label(s.config()) << ',' << storage_bytes(s) << ','
            << fmt_double(total_compression_ratio(s)) << ',' << storage_bytes(csr) << ','
            << fmt_double(total_compression_ratio(csr)) << '\n';
      }
      return kExitOk;
    }

    if (*storage) {
      SmashConfig config;
      config.comp.assign(o.levels == 0 ? 1 : static_cast<std::size_t>(o.levels), o.upper);
      config.comp[0] = o.comp0;
      config.validate();
      const auto files = list_matrices(o.in);
      std::vector<json> rows(files.size());
      parallel_for(files.size(), [&](std::size_t i) {
        const CoordinateMatrix m = load_matrix_market_file(files[i]);
        const SmashMatrix s = encode(m, config);
        const CsrMatrix csr = to_csr(m);
        const auto st = compute_stats(m, config.comp[0]);
        rows[i] = json{{"matrix", matrix_id(files[i])},
                       {"rows", m.rows()},
                       {"cols", m.cols()},
                       {"nnz", m.nnz()},
                       {"sparsity", st.sparsity},
                       {"locality", st.locality_of_sparsity.value_or(0.0)},
                       {"comp", comp_label(config)},
                       {"csr_bytes", storage_bytes(csr)},
                       {"smash_bytes", storage_bytes(s)},
                       {"csr_ratio", total_compression_ratio(csr)},
                       {"smash_ratio", total_compression_ratio(s)}};
      });
      if (o.format == "json") {
        out << json(rows).dump(2) << '\n';
      } else {
        out << "matrix,rows,cols,nnz,sparsity,locality,comp,csr_bytes,smash_bytes,csr_ratio,smash_ratio\n";
        for (const json& r : rows) {
          out << r["matrix"].get<std::string>() << ',' << r["rows"] << ',' << r["cols"] << ',' << r["nnz"] << ','
              << fmt_double(r["sparsity"]) << ',' << fmt_double(r["locality"]) << ','
              << r["comp"].get<std::string>() << ',' << r["csr_bytes"] << ',' << r["smash_bytes"] << ','
              << fmt_double(r["csr_ratio"]) << ',' << fmt_double(r["smash_ratio"]) << '\n';
        }
      }
      return kExitOk;
    }

    const std::vector<Backend> vector_backends{Backend::dense, Backend::csr, Backend::csr_ideal, Backend::bcsr,
                                               Backend::smash_sw, Backend::smash_bmu};
    const std::vector<Backend> spmm_backends{Backend::dense, Backend::csr, Backend::csr_ideal, Backend::smash_bmu};
    const std::vector<Backend> spadd_backends{Backend::dense, Backend::csr, Backend::smash_sw};
    const std::vector<Backend> graph_backends{Backend::csr, Backend::smash_sw, Backend::smash_bmu};

    std::vector<BenchRecord> records;
    if (*spmv || *spmm || *spadd) {
      const SmashConfig config = make_config(o);
      Runner runner(o, config);
      const CoordinateMatrix a = load_any(o.in);
      const CoordinateMatrix b = o.rhs.empty() ? a : load_any(o.rhs);
      if (*spmv) records = runner.spmv(a, matrix_id(o.in), parse_backends(o.backends, vector_backends));
      if (*spmm) records = runner.spmm(a, b, matrix_id(o.in), parse_backends(o.backends, spmm_backends));
      if (*spadd) records = runner.spadd(a, b, matrix_id(o.in), parse_backends(o.backends, spadd_backends));
    } else if (*pr || *bc) {
      Runner runner(o, make_config(o));
      const Graph g = load_graph_file(o.in, o.undirected);
      DenseVector result;
      const auto backends = parse_backends(o.backends, graph_backends);
      records = *pr ? runner.pagerank(g, matrix_id(o.in), backends, &result)
                    : runner.bc(g, matrix_id(o.in), backends, &result);
      if (!o.out.empty()) write_vector(o.out + (*pr ? ".ranks" : ".scores"), result);
    } else if (*bench) {
      // Configurations to run: one, or one per swept Bitmap-0 ratio.
      std::vector<SmashConfig> configs;
      CompSpec spec = o.comp.empty() ? CompSpec{{2}, true} : parse_comp(o.comp);
      if (spec.sweep) {
        const std::size_t levels = o.levels == 0 ? 1 : static_cast<std::size_t>(o.levels);
        for (std::uint32_t c0 : spec.values) {
          SmashConfig c;
          c.orientation = parse_orientation(o.orientation);
          c.comp.assign(levels, o.upper);
          c.comp[0] = c0;
          c.validate();
          configs.push_back(c);
        }
      } else {
        configs.push_back(make_config(o));
      }

      struct Input {
        std::string id;
        CoordinateMatrix m;
      };
      std::vector<Input> inputs;
      if (!o.synthetic.empty()) {
        std::string id;
        CoordinateMatrix m = synthetic_matrix(o.synthetic, o.seed, id);
        inputs.push_back({id, std::move(m)});
      } else if (!o.in.empty()) {
        for (const auto& f : list_matrices(o.in)) inputs.push_back({matrix_id(f), load_matrix_market_file(f)});
      } else {
        throw ArgumentError("bench needs --in or --synthetic");
      }

      const std::vector<Backend>* defaults = &vector_backends;
      if (workload == "spmm") defaults = &spmm_backends;
      if (workload == "spadd") defaults = &spadd_backends;
      if (workload == "pagerank" || workload == "bc") defaults = &graph_backends;
      const auto backends = parse_backends(o.backends, *defaults);

      std::vector<std::vector<BenchRecord>> parts(inputs.size() * configs.size());
      parallel_for(parts.size(), [&](std::size_t k) {
        const Input& in = inputs[k / configs.size()];
        Runner runner(o, configs[k % configs.size()]);
        if (workload == "spmv") {
          parts[k] = runner.spmv(in.m, in.id, backends);
        } else if (workload == "spmm") {
          parts[k] = runner.spmm(in.m, in.m, in.id, backends);
        } else if (workload == "spadd") {
          parts[k] = runner.spadd(in.m, in.m, in.id, backends);
        } else {
          if (in.m.rows() != in.m.cols()) throw DimensionError("graph workloads need a square matrix");
          const Graph g = Graph::from_matrix(in.m);
          parts[k] = workload == "pagerank" ? runner.pagerank(g, in.id, backends, nullptr)
                                            : runner.bc(g, in.id, backends, nullptr);
        }
      });
      for (auto& p : parts) records.insert(records.end(), p.begin(), p.end());
    }

    emit_records(records, o, args, out);
    if (!all_verified(records)) {
      err << "error: at least one backend disagrees with the dense reference\n";
      return kExitMismatch;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace smash::cli
