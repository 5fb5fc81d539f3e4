#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smash/coordinate_matrix.hpp"
#include "smash/kernels.hpp"

namespace smash {

/// Unweighted graph in pull form: adjacency entry (i, j) = 1 means an edge
/// j -> i, so one SpMV gathers along incoming edges.
struct Graph {
  Index vertices = 0;
  CoordinateMatrix adjacency;
  std::vector<Index> out_degree;
  /// Every edge is stored in both directions.
  bool undirected = false;

  /// Duplicate edges collapse. With `undirected`, each pair adds both directions.
  static Graph from_edges(Index vertices, std::span<const std::pair<Index, Index>> edges, bool undirected = false);
  /// Matrix Market convention: entry (u, v) is the edge u -> v. The graph is
  /// undirected when the pattern is symmetric.
  static Graph from_matrix(const CoordinateMatrix& m);
};

/// "u v" per line, 0-based; blank lines and lines starting with '#' or '%'
/// are skipped. The vertex count is one past the largest id.
Graph load_edge_list(std::istream& in, bool undirected = false);
/// .mtx files go through the Matrix Market reader, anything else is an edge list.
Graph load_graph_file(const std::string& path, bool undirected = false);

struct PageRankResult {
  DenseVector ranks;
  /// Rank total after each iteration.
  std::vector<double> iteration_sums;
  OpCounters counters;
};

/// r <- (1 - d) / N + d * (M r + dangling / N), with M column-stochastic by
/// out-degree and dangling mass spread uniformly. Starts from 1/N.
PageRankResult pagerank(const Graph& g, double damping, std::size_t iterations, Backend backend,
                        const SmashConfig& config = {});

/// BFS levels from `source`, expanding each frontier with one boolean-semiring
/// SpMV on `pull` (built over Graph::adjacency).
std::vector<std::vector<Index>> bfs_levels(SpmvEngine& pull, Index source, OpCounters* counters = nullptr);

struct CentralityResult {
  DenseVector scores;
  OpCounters counters;
};

/// Brandes betweenness: BFS frontiers via boolean SpMV, path counts and the
/// backward dependency sweep via arithmetic SpMV. Undirected graphs count each
/// unordered pair once.
CentralityResult betweenness_centrality(const Graph& g, std::span<const Index> sources, Backend backend,
                                        const SmashConfig& config = {});
/// All vertices as sources.
CentralityResult betweenness_centrality(const Graph& g, Backend backend, const SmashConfig& config = {});

}  // namespace smash
