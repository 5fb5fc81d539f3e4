#include "smash/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include "smash/error.hpp"
#include "smash/matrix_market.hpp"

namespace smash {

Graph Graph::from_edges(Index vertices, std::span<const std::pair<Index, Index>> edges, bool undirected) {
  std::set<std::pair<Index, Index>> pull;  // (to, from)
  for (auto [u, v] : edges) {
    if (u >= vertices || v >= vertices) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") names a missing vertex");
    }
    pull.emplace(v, u);
    if (undirected) pull.emplace(u, v);
  }
  Graph g;
  g.vertices = vertices;
  g.undirected = undirected;
  g.out_degree.assign(vertices, 0);
  std::vector<Entry> entries;
  entries.reserve(pull.size());
  for (auto [to, from] : pull) {
    entries.push_back({to, from, 1.0});
    ++g.out_degree[from];
  }
  g.adjacency = CoordinateMatrix(vertices, vertices, std::move(entries));
  return g;
}

Graph Graph::from_matrix(const CoordinateMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("adjacency matrix must be square");
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(m.nnz());
  bool symmetric = true;
  for (const Entry& e : m.entries()) {
    edges.emplace_back(e.row, e.col);
    if (symmetric && m.at(e.col, e.row) == 0.0) symmetric = false;
  }
  return from_edges(m.rows(), edges, symmetric);
}

Graph load_edge_list(std::istream& in, bool undirected) {
  std::vector<std::pair<Index, Index>> edges;
  Index vertices = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a) || a[0] == '#' || a[0] == '%') continue;
    if (!(fields >> b) || (fields >> extra)) throw ParseError(line_no, "expected 'u v'");
    Index u = 0, v = 0;
    auto ra = std::from_chars(a.data(), a.data() + a.size(), u);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), v);
    if (ra.ec != std::errc() || ra.ptr != a.data() + a.size() || rb.ec != std::errc() ||
        rb.ptr != b.data() + b.size()) {
      throw ParseError(line_no, "vertex ids must be non-negative integers");
    }
    edges.emplace_back(u, v);
    vertices = std::max({vertices, u + 1, v + 1});
  }
  return Graph::from_edges(vertices, edges, undirected);
}

Graph load_graph_file(const std::string& path, bool undirected) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".mtx") == 0) {
    Graph g = Graph::from_matrix(load_matrix_market_file(path));
    if (undirected && !g.undirected) {
      std::vector<std::pair<Index, Index>> edges;
      for (const Entry& e : g.adjacency.entries()) edges.emplace_back(e.col, e.row);
      g = Graph::from_edges(g.vertices, edges, true);
    }
    return g;
  }
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return load_edge_list(in, undirected);
}

PageRankResult pagerank(const Graph& g, double damping, std::size_t iterations, Backend backend,
                        const SmashConfig& config) {
  if (g.vertices == 0) throw ArgumentError("PageRank on an empty graph");
  if (!(damping > 0.0 && damping < 1.0)) throw ArgumentError("damping must lie strictly between 0 and 1");
  const Index n = g.vertices;
  const double inv_n = 1.0 / static_cast<double>(n);
  SpmvEngine engine(g.adjacency, backend, config);
  PageRankResult result;
  result.ranks.assign(n, inv_n);
  DenseVector x(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    double dangling = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (g.out_degree[j] == 0) {
        dangling += result.ranks[j];
        x[j] = 0.0;
      } else {
        x[j] = result.ranks[j] / static_cast<double>(g.out_degree[j]);
      }
    }
    auto y = engine.apply(x);
    result.counters += y.counters;
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      result.ranks[i] = base + damping * y.output[i];
      sum += result.ranks[i];
    }
    result.iteration_sums.push_back(sum);
  }
  return result;
}

std::vector<std::vector<Index>> bfs_levels(SpmvEngine& pull, Index source, OpCounters* counters) {
  const Index n = pull.rows();
  if (source >= n) throw ArgumentError("source vertex " + std::to_string(source) + " out of range");
  std::vector<std::vector<Index>> levels{{source}};
  std::vector<bool> visited(n, false);
  visited[source] = true;
  DenseVector frontier(n, 0.0);
  frontier[source] = 1.0;
  while (true) {
    auto reached = pull.apply(frontier, Semiring::boolean);
    if (counters) *counters += reached.counters;
    std::vector<Index> next;
    std::fill(frontier.begin(), frontier.end(), 0.0);
    for (Index v = 0; v < n; ++v) {
      if (reached.output[v] != 0.0 && !visited[v]) {
        visited[v] = true;
        next.push_back(v);
        frontier[v] = 1.0;
      }
    }
    if (next.empty()) break;
    levels.push_back(std::move(next));
  }
  return levels;
}

CentralityResult betweenness_centrality(const Graph& g, std::span<const Index> sources, Backend backend,
                                        const SmashConfig& config) {
  const Index n = g.vertices;
  for (Index s : sources) {
    if (s >= n) throw ArgumentError("source vertex " + std::to_string(s) + " out of range");
  }
  SpmvEngine pull(g.adjacency, backend, config);
  SpmvEngine push(g.adjacency.transposed(), backend, config);
  CentralityResult result;
  result.scores.assign(n, 0.0);

  DenseVector sigma(n), delta(n), x(n);
  for (Index s : sources) {
    const auto levels = bfs_levels(pull, s, &result.counters);

    // Shortest-path counts, level by level.
    std::fill(sigma.begin(), sigma.end(), 0.0);
    sigma[s] = 1.0;
    for (std::size_t d = 1; d < levels.size(); ++d) {
      std::fill(x.begin(), x.end(), 0.0);
      for (Index u : levels[d - 1]) x[u] = sigma[u];
      auto y = pull.apply(x);
      result.counters += y.counters;
      for (Index v : levels[d]) sigma[v] = y.output[v];
    }

    // Dependencies, deepest level first.
    std::fill(delta.begin(), delta.end(), 0.0);
    for (std::size_t d = levels.size(); d-- > 1;) {
      std::fill(x.begin(), x.end(), 0.0);
      for (Index w : levels[d]) x[w] = (1.0 + delta[w]) / sigma[w];
      auto z = push.apply(x);
      result.counters += z.counters;
      for (Index v : levels[d - 1]) delta[v] += sigma[v] * z.output[v];
    }
    for (std::size_t d = 1; d < levels.size(); ++d) {
      for (Index v : levels[d]) result.scores[v] += delta[v];
    }
  }
  if (g.undirected) {
    for (double& c : result.scores) c /= 2.0;
  }
  return result;
}

CentralityResult betweenness_centrality(const Graph& g, Backend backend, const SmashConfig& config) {
  std::vector<Index> all(g.vertices);
  std::iota(all.begin(), all.end(), Index{0});
  return betweenness_centrality(g, all, backend, config);
}

}  // namespace smash
