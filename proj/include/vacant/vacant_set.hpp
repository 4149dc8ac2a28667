#pragma once

// Visited-set tracking along a walk, census of the components induced by
// the unvisited vertices, bad-vertex scan, and snapshot sweeps of t around
// t* = n ln d.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "vacant/graph.hpp"
#include "vacant/rng.hpp"
#include "vacant/union_find.hpp"
#include "vacant/vertex_set.hpp"
#include "vacant/walk.hpp"

namespace vacant {

/// Walk observer recording which vertices were visited at steps >=
/// window_start (0 records the whole trajectory; T gives the U_0 window).
class VisitBitmap {
 public:
  explicit VisitBitmap(std::int64_t n, std::int64_t window_start = 0)
      : window_start_(window_start), visited_(n) {}

  void operator()(std::int64_t step, Vertex v) {
    if (step >= window_start_) visited_.insert(v);
  }

  std::int64_t window_start() const { return window_start_; }
  std::int64_t visited_count() const { return visited_.size(); }
  const VertexSet& visited() const { return visited_; }
  VertexSet vacant() const { return visited_.complement(); }

 private:
  std::int64_t window_start_;
  VertexSet visited_;
};

struct ComponentCensus {
  std::vector<std::int64_t> sizes;  // descending
  std::int64_t largest = 0;         // L_1
  std::int64_t components = 0;
  std::int64_t vacant_size = 0;
};

/// Component sizes of the subgraph induced by `vacant`, via union-find over
/// vacant-vacant edges.
inline ComponentCensus component_census(const Graph& g, const VertexSet& vacant) {
  ComponentCensus census;
  census.vacant_size = vacant.size();
  UnionFind uf(g.vertex_count());
  vacant.for_each([&](Vertex v) {
    const int dv = g.degree(v);
    for (int i = 0; i < dv; ++i) {
      const Vertex w = g.neighbor(v, i);
      if (w > v && vacant.contains(w)) uf.unite(v, w);
    }
  });
  VertexSet counted(g.vertex_count());
  vacant.for_each([&](Vertex v) {
    const auto root = static_cast<Vertex>(uf.find(v));
    if (counted.insert(root)) census.sizes.push_back(uf.component_size(root));
  });
  std::sort(census.sizes.begin(), census.sizes.end(), std::greater<>());
  census.components = static_cast<std::int64_t>(census.sizes.size());
  census.largest = census.sizes.empty() ? 0 : census.sizes.front();
  return census;
}

struct BadVertexReport {
  double eps = 0;
  double threshold = 0;  // d^eps / 2, compared exactly (no rounding)
  VertexSet bad;
  std::int64_t count = 0;
};

/// A vertex is bad when it has fewer than d^eps / 2 neighbors in `vacant`.
inline BadVertexReport bad_vertices(const Graph& g, const VertexSet& vacant, double eps) {
  if (!(eps > 0) || !(eps < 1)) throw std::invalid_argument("bad_vertices: eps must be in (0, 1)");
  if (!g.regular()) throw std::invalid_argument("bad_vertices: regular graph required");
  BadVertexReport report{eps, std::pow(g.regular_degree(), eps) / 2.0,
                         VertexSet(g.vertex_count()), 0};
  const std::int64_t n = g.vertex_count();
  for (std::int64_t v = 0; v < n; ++v) {
    const auto vv = static_cast<Vertex>(v);
    std::int64_t unvisited = 0;
    const int dv = g.degree(vv);
    for (int i = 0; i < dv; ++i)
      if (vacant.contains(g.neighbor(vv, i))) ++unvisited;
    if (static_cast<double>(unvisited) < report.threshold) {
      report.bad.insert(vv);
      ++report.count;
    }
  }
  return report;
}

struct VacantSnapshot {
  double multiplier;
  std::int64_t step;  // steps of the chosen clock
  std::int64_t vacant_size;
  ComponentCensus census;
  std::int64_t bad_count;
};

/// One walk per call; at each multiplier m the walk is paused at step
/// m * n ln d (speedy clock) or m * 2 n ln d (lazy clock, which corresponds
/// to the same amount of movement) and the vacant set is censused.
/// Snapshots along one trajectory are nested.
inline std::vector<VacantSnapshot> vacant_snapshot_run(const Graph& g, double eps,
                                                       const std::vector<double>& multipliers,
                                                       WalkMode clock, Rng rng, Vertex start = 0) {
  if (multipliers.empty()) throw std::invalid_argument("vacant_snapshot_run: no multipliers");
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    if (multipliers[i] < 0) throw std::invalid_argument("vacant_snapshot_run: negative multiplier");
    if (i > 0 && multipliers[i] < multipliers[i - 1])
      throw std::invalid_argument("vacant_snapshot_run: multipliers must be sorted");
  }
  const double n = static_cast<double>(g.vertex_count());
  const double d = static_cast<double>(g.regular_degree());
  const double t_star = n * std::log(d);
  const double clock_scale = clock == WalkMode::speedy ? 1.0 : 2.0;

  std::vector<VacantSnapshot> out;
  out.reserve(multipliers.size());
  WalkState s{start, 0, 0, rng};
  VisitBitmap bitmap(g.vertex_count());
  bitmap(0, start);
  for (double m : multipliers) {
    const auto target = static_cast<std::int64_t>(std::llround(m * clock_scale * t_star));
    while (s.steps < target) {
      if (clock == WalkMode::speedy)
        speedy_step(g, s);
      else
        lazy_step(g, s);
      bitmap(s.steps, s.position);
    }
    const VertexSet vac = bitmap.vacant();
    ComponentCensus census = component_census(g, vac);
    const auto bad = bad_vertices(g, vac, eps);
    out.push_back(VacantSnapshot{m, target, vac.size(), std::move(census), bad.count});
  }
  return out;
}

}  // namespace vacant
