#pragma once

// Multigraph with loop and parallel-edge multiplicities. The main producer
// is contract(), which collapses a vertex subset S to a single vertex gamma
// while keeping every edge of the source graph: edges inside S become loops
// at gamma, edges leaving S become (possibly parallel) gamma-edges. A loop
// contributes 2 to the degree of its vertex, so deg(gamma) = d * |S| on a
// d-regular source and the total degree stays 2m.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vacant/graph.hpp"
#include "vacant/rng.hpp"
#include "vacant/vertex_set.hpp"

namespace vacant {

class MultiGraph {
 public:
  struct Edge {
    Vertex to;
    std::int64_t multiplicity;
  };

  explicit MultiGraph(std::int64_t n) : n_(n), loops_(n, 0), adjacency_(n) {
    if (n < 1) throw std::invalid_argument("MultiGraph: empty vertex set");
  }

  /// u == v adds a loop. Call finalize() once all edges are in.
  void add_edge(Vertex u, Vertex v, std::int64_t multiplicity = 1) {
    if (u >= n_ || v >= n_) throw std::invalid_argument("MultiGraph::add_edge: id out of range");
    if (multiplicity < 1) throw std::invalid_argument("MultiGraph::add_edge: multiplicity < 1");
    if (finalized_) throw std::logic_error("MultiGraph::add_edge: already finalized");
    if (u == v) {
      loops_[u] += multiplicity;
    } else {
      adjacency_[u].push_back({v, multiplicity});
      adjacency_[v].push_back({u, multiplicity});
    }
  }

  void finalize() {
    if (finalized_) return;
    degree_.assign(n_, 0);
    cumulative_.assign(n_, {});
    std::int64_t nonloop_endpoints = 0;
    for (std::int64_t v = 0; v < n_; ++v) {
      auto& adj = adjacency_[v];
      std::sort(adj.begin(), adj.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
      std::vector<Edge> merged;
      for (const Edge& e : adj) {
        if (!merged.empty() && merged.back().to == e.to)
          merged.back().multiplicity += e.multiplicity;
        else
          merged.push_back(e);
      }
      adj = std::move(merged);
      std::int64_t deg = 2 * loops_[v];
      auto& cum = cumulative_[v];
      cum.reserve(adj.size());
      std::int64_t acc = 0;
      for (const Edge& e : adj) {
        deg += e.multiplicity;
        acc += e.multiplicity;
        cum.push_back(acc);
      }
      degree_[v] = deg;
      nonloop_endpoints += acc;
    }
    edge_total_ = nonloop_endpoints / 2 + loop_total();
    finalized_ = true;
  }

  std::int64_t vertex_count() const { return n_; }

  /// Edges counted once each; a loop counts as one edge.
  std::int64_t edge_total() const {
    require_finalized();
    return edge_total_;
  }

  std::int64_t loop_total() const {
    std::int64_t s = 0;
    for (auto l : loops_) s += l;
    return s;
  }

  /// Endpoint count at v; each loop contributes 2.
  std::int64_t degree(Vertex v) const {
    require_finalized();
    return degree_[v];
  }

  std::int64_t loop_count(Vertex v) const { return loops_[v]; }

  const std::vector<Edge>& edges(Vertex v) const { return adjacency_[v]; }

  /// Endpoint with index k in [0, degree(v)). Indices below 2*loop_count(v)
  /// are loop endpoints and resolve to v itself.
  Vertex endpoint(Vertex v, std::int64_t k) const {
    require_finalized();
    const std::int64_t loop_ends = 2 * loops_[v];
    if (k < loop_ends) return v;
    k -= loop_ends;
    const auto& cum = cumulative_[v];
    const auto it = std::upper_bound(cum.begin(), cum.end(), k);
    return adjacency_[v][static_cast<std::size_t>(it - cum.begin())].to;
  }

  /// Number of endpoints at v that lead to a different vertex.
  std::int64_t move_endpoints(Vertex v) const {
    require_finalized();
    return degree_[v] - 2 * loops_[v];
  }

 private:
  void require_finalized() const {
    if (!finalized_) throw std::logic_error("MultiGraph: finalize() not called");
  }

  std::int64_t n_;
  bool finalized_ = false;
  std::int64_t edge_total_ = 0;
  std::vector<std::int64_t> loops_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<std::int64_t> degree_;
  std::vector<std::vector<std::int64_t>> cumulative_;
};

struct Contraction {
  MultiGraph graph;
  Vertex gamma;                 // id of the contracted vertex (last id)
  std::vector<Vertex> to_new;   // original id -> contracted id; members of S map to gamma
};

/// Contract S to a single vertex, preserving all edges (as loops and
/// parallel edges). Requires a nonempty proper subset of V.
inline Contraction contract(const Graph& g, const VertexSet& S) {
  const std::int64_t n = g.vertex_count();
  if (S.empty() || S.size() >= n) throw std::invalid_argument("contract: S must be a nonempty proper subset");
  std::vector<Vertex> to_new(static_cast<std::size_t>(n));
  Vertex next = 0;
  for (std::int64_t v = 0; v < n; ++v)
    if (!S.contains(static_cast<Vertex>(v))) to_new[static_cast<std::size_t>(v)] = next++;
  const Vertex gamma = next;
  for (std::int64_t v = 0; v < n; ++v)
    if (S.contains(static_cast<Vertex>(v))) to_new[static_cast<std::size_t>(v)] = gamma;

  MultiGraph mg(next + 1);
  for (std::int64_t v = 0; v < n; ++v) {
    const auto vv = static_cast<Vertex>(v);
    const int dv = g.degree(vv);
    for (int i = 0; i < dv; ++i) {
      const Vertex w = g.neighbor(vv, i);
      if (w < vv) continue;  // each source edge once
      mg.add_edge(to_new[vv], to_new[w]);
    }
  }
  mg.finalize();
  return Contraction{std::move(mg), gamma, std::move(to_new)};
}

}  // namespace vacant
