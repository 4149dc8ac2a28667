#pragma once

// Lazy and speedy random-walk engine over Graph and MultiGraph. Observers
// are push-based callables obs(step, vertex); they may return bool to stop
// the walk early. One walk owns one Rng stream; graphs are shared read-only.

#include <cstdint>
#include <optional>
#include <type_traits>
#include <vector>

#include "vacant/graph.hpp"
#include "vacant/multigraph.hpp"
#include "vacant/rng.hpp"
#include "vacant/vertex_set.hpp"

namespace vacant {

enum class WalkMode { lazy, speedy };

struct WalkState {
  Vertex position;
  std::int64_t steps = 0;  // steps on the walk's own clock
  std::int64_t moves = 0;  // steps that changed the vertex
  Rng rng;
};

/// One lazy transition: stay with probability 1/2, otherwise follow a
/// uniformly chosen edge-endpoint. A single RNG draw decides both.
inline Vertex lazy_target(const Graph& g, Vertex v, Rng& rng) {
  const int d = g.degree(v);
  const auto k = static_cast<int>(rng.below(2 * static_cast<std::uint64_t>(d)));
  return k < d ? v : g.neighbor(v, k - d);
}

/// On a multigraph, endpoints are weighted by multiplicity and each loop
/// provides two endpoints that keep the walker in place.
inline Vertex lazy_target(const MultiGraph& g, Vertex v, Rng& rng) {
  const std::int64_t deg = g.degree(v);
  const auto k = static_cast<std::int64_t>(rng.below(2 * static_cast<std::uint64_t>(deg)));
  return k < deg ? v : g.endpoint(v, k - deg);
}

inline Vertex speedy_target(const Graph& g, Vertex v, Rng& rng) {
  return g.neighbor(v, static_cast<int>(rng.below(static_cast<std::uint64_t>(g.degree(v)))));
}

inline Vertex speedy_target(const MultiGraph& g, Vertex v, Rng& rng) {
  const std::int64_t movable = g.move_endpoints(v);
  if (movable == 0) throw std::logic_error("speedy_target: vertex has only loops");
  return g.endpoint(v, 2 * g.loop_count(v) + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(movable))));
}

template <class G>
void lazy_step(const G& g, WalkState& s) {
  const Vertex t = lazy_target(g, s.position, s.rng);
  if (t != s.position) ++s.moves;
  s.position = t;
  ++s.steps;
}

template <class G>
void speedy_step(const G& g, WalkState& s) {
  s.position = speedy_target(g, s.position, s.rng);
  ++s.moves;
  ++s.steps;
}

namespace detail {
template <class Obs>
bool observe(Obs&& obs, std::int64_t step, Vertex v) {
  if constexpr (std::is_void_v<decltype(obs(step, v))>) {
    obs(step, v);
    return true;
  } else {
    return obs(step, v);
  }
}
}  // namespace detail

/// Advance a walk for `horizon` steps of the chosen clock, feeding every
/// position (including the start at step 0) to the observer.
template <class G, class Obs>
WalkState run_walk(const G& g, Vertex start, std::int64_t horizon, WalkMode mode, Rng rng,
                   Obs&& obs) {
  WalkState s{start, 0, 0, rng};
  if (!detail::observe(obs, 0, start)) return s;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (mode == WalkMode::lazy)
      lazy_step(g, s);
    else
      speedy_step(g, s);
    if (!detail::observe(obs, t, s.position)) break;
  }
  return s;
}

struct Trajectory {
  WalkMode mode;
  std::vector<Vertex> positions;  // positions[t] is the position after step t
};

template <class G>
Trajectory record_walk(const G& g, Vertex start, std::int64_t horizon, WalkMode mode, Rng rng) {
  Trajectory tr{mode, {}};
  tr.positions.reserve(static_cast<std::size_t>(horizon) + 1);
  run_walk(g, start, horizon, mode, rng, [&](std::int64_t, Vertex v) { tr.positions.push_back(v); });
  return tr;
}

/// Drop hold steps from a lazy trajectory; what remains is a simple-walk
/// trajectory with the speedy law.
inline Trajectory speedy_projection(const Trajectory& lazy) {
  if (lazy.mode != WalkMode::lazy) throw std::invalid_argument("speedy_projection: lazy input required");
  Trajectory out{WalkMode::speedy, {}};
  for (Vertex v : lazy.positions)
    if (out.positions.empty() || out.positions.back() != v) out.positions.push_back(v);
  return out;
}

struct FirstVisit {
  std::optional<std::int64_t> step;
  std::optional<Vertex> vertex;
};

/// First step in the closed window [burn_in, horizon] whose position lies in
/// `targets`, running the lazy walk. Returns empty optionals on no hit.
template <class G>
FirstVisit first_visit_time(const G& g, Vertex start, const VertexSet& targets,
                            std::int64_t burn_in, std::int64_t horizon, Rng rng) {
  if (burn_in > horizon) throw std::invalid_argument("first_visit_time: burn_in > horizon");
  FirstVisit hit;
  run_walk(g, start, horizon, WalkMode::lazy, rng, [&](std::int64_t step, Vertex v) {
    if (step >= burn_in && targets.contains(v)) {
      hit.step = step;
      hit.vertex = v;
      return false;
    }
    return true;
  });
  return hit;
}

}  // namespace vacant
