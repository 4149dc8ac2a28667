#pragma once

// Regular graphs with two storage backends: the hypercube Q_d, whose
// adjacency is implicit (neighbor i flips bit i), and explicit adjacency
// lists used for random regular graphs and small hand-built test graphs.
// Graphs are immutable after construction and safe to share across threads.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vacant/errors.hpp"
#include "vacant/rng.hpp"
#include "vacant/vertex_set.hpp"

namespace vacant {

enum class GraphKind { hypercube, random_regular, edge_list };

class Graph {
 public:
  /// Hypercube Q_d on n = 2^d vertices; ids are coordinate bitmasks.
  static Graph hypercube(int d) {
    if (d < 1 || d > 30) throw std::invalid_argument("hypercube: d must be in [1, 30]");
    Graph g;
    g.kind_ = GraphKind::hypercube;
    g.dim_ = d;
    g.n_ = std::int64_t{1} << d;
    g.regular_degree_ = d;
    return g;
  }

  /// Configuration model conditioned on simplicity: pair degree stubs
  /// uniformly, restart from scratch on any loop or repeated edge.
  /// Deterministic given the seed. Practical only for small d; the
  /// restart count grows like e^{(d^2-1)/4}.
  static Graph random_regular(std::int64_t n, int d, std::uint64_t seed,
                              int max_restarts = 200000) {
    if (n < 2 || d < 1 || d >= n) throw std::invalid_argument("random_regular: need 2 <= d+1 <= n");
    if ((n * d) % 2 != 0) throw std::invalid_argument("random_regular: n*d must be even");
    Rng rng(seed);
    std::vector<Vertex> stubs(static_cast<std::size_t>(n) * d);
    for (std::int64_t v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) stubs[static_cast<std::size_t>(v) * d + i] = static_cast<Vertex>(v);

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(stubs.size() / 2);
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
      for (std::size_t i = stubs.size() - 1; i > 0; --i)
        std::swap(stubs[i], stubs[rng.below(i + 1)]);
      edges.clear();
      bool ok = true;
      std::unordered_set<std::uint64_t> seen;
      seen.reserve(stubs.size());
      for (std::size_t i = 0; i < stubs.size(); i += 2) {
        Vertex a = stubs[i], b = stubs[i + 1];
        if (a == b) {
          ok = false;
          break;
        }
        if (a > b) std::swap(a, b);
        if (!seen.insert((std::uint64_t{a} << 32) | b).second) {
          ok = false;
          break;
        }
        edges.emplace_back(a, b);
      }
      if (ok) {
        Graph g = from_edges(n, edges);
        g.kind_ = GraphKind::random_regular;
        return g;
      }
    }
    throw SamplingFailure("random_regular: rejection budget exhausted (n=" + std::to_string(n) +
                          ", d=" + std::to_string(d) + ")");
  }

  /// Explicit graph from an undirected edge list. Rejects loops and
  /// duplicate edges. Need not be regular.
  static Graph from_edges(std::int64_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    if (n < 1) throw std::invalid_argument("from_edges: empty vertex set");
    std::vector<std::int64_t> deg(n, 0);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("from_edges: vertex id out of range");
      if (u == v) throw std::invalid_argument("from_edges: self-loop");
      const std::uint64_t key = (std::uint64_t{std::min(u, v)} << 32) | std::max(u, v);
      if (!seen.insert(key).second) throw std::invalid_argument("from_edges: duplicate edge");
      ++deg[u];
      ++deg[v];
    }
    Graph g;
    g.kind_ = GraphKind::edge_list;
    g.n_ = n;
    g.offsets_.assign(n + 1, 0);
    for (std::int64_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.neighbors_.resize(static_cast<std::size_t>(g.offsets_[n]));
    std::vector<std::int64_t> fill = g.offsets_;
    for (auto [u, v] : edges) {
      g.neighbors_[static_cast<std::size_t>(fill[u]++)] = v;
      g.neighbors_[static_cast<std::size_t>(fill[v]++)] = u;
    }
    for (std::int64_t v = 0; v < n; ++v)
      std::sort(g.neighbors_.begin() + g.offsets_[v], g.neighbors_.begin() + g.offsets_[v + 1]);
    const bool reg = n > 0 && std::all_of(deg.begin(), deg.end(),
                                          [&](std::int64_t x) { return x == deg[0]; });
    g.regular_degree_ = reg ? static_cast<int>(deg[0]) : -1;
    return g;
  }

  static Graph complete(std::int64_t n) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    Graph g = from_edges(n, edges);
    return g;
  }

  GraphKind kind() const { return kind_; }
  std::int64_t vertex_count() const { return n_; }

  std::int64_t edge_count() const {
    if (kind_ == GraphKind::hypercube) return n_ * dim_ / 2;
    return static_cast<std::int64_t>(neighbors_.size()) / 2;
  }

  bool regular() const { return regular_degree_ >= 0; }

  int regular_degree() const {
    if (regular_degree_ < 0) throw std::logic_error("graph is not regular");
    return regular_degree_;
  }

  int degree(Vertex v) const {
    if (kind_ == GraphKind::hypercube) return dim_;
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }

  Vertex neighbor(Vertex v, int slot) const {
    if (kind_ == GraphKind::hypercube) return v ^ (Vertex{1} << slot);
    return neighbors_[static_cast<std::size_t>(offsets_[v] + slot)];
  }

  /// Hypercube dimension; -1 for other backends.
  int dim() const { return kind_ == GraphKind::hypercube ? dim_ : -1; }

 private:
  Graph() = default;

  GraphKind kind_ = GraphKind::edge_list;
  std::int64_t n_ = 0;
  int dim_ = -1;
  int regular_degree_ = -1;
  std::vector<std::int64_t> offsets_;
  std::vector<Vertex> neighbors_;
};

inline int hamming_distance(Vertex u, Vertex v) { return std::popcount(u ^ v); }

/// BFS distances from src; -1 marks vertices not reached (or beyond
/// depth_cap when one is given).
inline std::vector<std::int32_t> bfs_distances(const Graph& g, Vertex src,
                                               std::int32_t depth_cap = -1) {
  std::vector<std::int32_t> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<Vertex> frontier{src}, next;
  dist[src] = 0;
  std::int32_t level = 0;
  while (!frontier.empty() && (depth_cap < 0 || level < depth_cap)) {
    ++level;
    next.clear();
    for (Vertex v : frontier) {
      const int dv = g.degree(v);
      for (int i = 0; i < dv; ++i) {
        const Vertex w = g.neighbor(v, i);
        if (dist[w] < 0) {
          dist[w] = level;
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

/// Shortest-path length; nullopt when u and v are disconnected.
inline std::optional<std::int64_t> graph_distance(const Graph& g, Vertex u, Vertex v) {
  if (u == v) return 0;
  const auto dist = bfs_distances(g, u);
  if (dist[v] < 0) return std::nullopt;
  return static_cast<std::int64_t>(dist[v]);
}

/// nu(u, v): the number of neighbors w of v with dist(w, u) <= dist(u, v).
inline std::int64_t closer_neighbor_count(const Graph& g, Vertex u, Vertex v) {
  if (u == v) throw std::invalid_argument("closer_neighbor_count: u == v");
  const auto dist = bfs_distances(g, u);
  if (dist[v] < 0) return 0;
  std::int64_t count = 0;
  const int dv = g.degree(v);
  for (int i = 0; i < dv; ++i) {
    const Vertex w = g.neighbor(v, i);
    if (dist[w] >= 0 && dist[w] <= dist[v]) ++count;
  }
  return count;
}

/// e(S): number of edges with both endpoints in S.
inline std::int64_t induced_edge_count(const Graph& g, const VertexSet& S) {
  std::int64_t twice = 0;
  S.for_each([&](Vertex v) {
    const int dv = g.degree(v);
    for (int i = 0; i < dv; ++i)
      if (S.contains(g.neighbor(v, i))) ++twice;
  });
  return twice / 2;
}

inline bool is_connected(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::all_of(dist.begin(), dist.end(), [](std::int32_t d) { return d >= 0; });
}

}  // namespace vacant
