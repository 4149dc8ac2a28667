#pragma once

// Monte Carlo estimators for the quantities the exact chain computations
// predict. Every estimator is reproducible bit for bit from its seed: trial
// i draws from Rng(seed, i), workers only fill integer statistics or
// per-trial slots, and the merge order is fixed.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vacant/chain.hpp"
#include "vacant/graph.hpp"
#include "vacant/multigraph.hpp"
#include "vacant/parallel.hpp"
#include "vacant/rng.hpp"
#include "vacant/vacant_set.hpp"
#include "vacant/vertex_set.hpp"
#include "vacant/walk.hpp"

namespace vacant {

struct Estimate {
  double value = 0;
  double se = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Mean number of visits to v in lazy steps 0..T of a walk started at v.
template <class G>
Estimate estimate_return_sum(const G& g, Vertex v, std::int64_t T, std::int64_t trials,
                             std::uint64_t seed, int threads = 1) {
  if (trials < 1) throw std::invalid_argument("estimate_return_sum: trials < 1");
  std::vector<std::int64_t> visits(static_cast<std::size_t>(trials), 0);
  parallel_trials(trials, threads, [&](std::int64_t i) {
    WalkState s{v, 0, 0, Rng(seed, static_cast<std::uint64_t>(i))};
    std::int64_t count = 1;  // step 0
    for (std::int64_t t = 1; t <= T; ++t) {
      lazy_step(g, s);
      if (s.position == v) ++count;
    }
    visits[static_cast<std::size_t>(i)] = count;
  });
  double sum = 0, sumsq = 0;
  for (auto c : visits) {
    sum += static_cast<double>(c);
    sumsq += static_cast<double>(c) * static_cast<double>(c);
  }
  const double mean = sum / static_cast<double>(trials);
  double se = 0;
  if (trials > 1) {
    const double var = (sumsq - sum * mean) / static_cast<double>(trials - 1);
    se = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  }
  return Estimate{mean, se, trials, seed};
}

struct SurvivalCurve {
  std::int64_t burn_in = 0;
  std::int64_t tmax = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> survivors;  // index k: trials with no hit in (burn_in, burn_in+k]
  double fitted_rate = 0;               // from log-linear fit on [fit_from, tmax]
  std::int64_t fit_from = 0;

  double survival(std::int64_t t) const {
    return static_cast<double>(survivors[static_cast<std::size_t>(t - burn_in)]) /
           static_cast<double>(trials);
  }
};

namespace detail {
/// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace detail

/// Empirical Pr(no visit to v during (burn_in, t]) for t up to tmax, with a
/// fitted exponential decay rate over t in [2 K burn_in ln n, tmax].
template <class G>
SurvivalCurve survival_curve(const G& g, Vertex v, Vertex start, std::int64_t burn_in,
                             std::int64_t tmax, std::int64_t trials, std::uint64_t seed,
                             double fit_constant_K = 1.0, int threads = 1) {
  if (burn_in > tmax) throw std::invalid_argument("survival_curve: burn_in > tmax");
  if (trials < 1) throw std::invalid_argument("survival_curve: trials < 1");
  const std::int64_t n = g.vertex_count();
  VertexSet target(n, {v});
  std::vector<std::int64_t> tau(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](std::int64_t i) {
    const auto hit = first_visit_time(g, start, target, burn_in + 1, tmax,
                                      Rng(seed, static_cast<std::uint64_t>(i)));
    tau[static_cast<std::size_t>(i)] = hit.step ? *hit.step : tmax + 1;
  });
  SurvivalCurve curve;
  curve.burn_in = burn_in;
  curve.tmax = tmax;
  curve.trials = trials;
  curve.seed = seed;
  std::vector<std::int64_t> hits_at(static_cast<std::size_t>(tmax - burn_in) + 2, 0);
  for (auto t : tau)
    if (t <= tmax) ++hits_at[static_cast<std::size_t>(t - burn_in)];
  curve.survivors.resize(static_cast<std::size_t>(tmax - burn_in) + 1);
  std::int64_t alive = trials;
  for (std::int64_t t = burn_in; t <= tmax; ++t) {
    alive -= hits_at[static_cast<std::size_t>(t - burn_in)];
    curve.survivors[static_cast<std::size_t>(t - burn_in)] = alive;
  }
  curve.fit_from = std::min(
      tmax, static_cast<std::int64_t>(std::ceil(2.0 * fit_constant_K * static_cast<double>(burn_in) *
                                                std::log(static_cast<double>(n)))));
  std::vector<double> xs, ys;
  for (std::int64_t t = std::max(curve.fit_from, burn_in); t <= tmax; ++t) {
    const double s = curve.survival(t);
    if (s > 0) {
      xs.push_back(static_cast<double>(t));
      ys.push_back(std::log(s));
    }
  }
  if (xs.size() < 2) throw InsufficientData("survival_curve: not enough surviving trials to fit");
  curve.fitted_rate = -detail::ls_slope(xs, ys);
  return curve;
}

struct WhichVertexFreq {
  std::vector<Vertex> targets;
  std::vector<std::int64_t> hits;
  std::vector<double> freq;
  std::vector<double> se;  // multinomial, per component
  std::int64_t conditioned = 0;
  std::int64_t censored = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double xi = 0;  // L * pi_S with L = 2 K T ln n
};

/// Law of which target receives the first visit in (T, horizon], conditioned
/// on a hit happening by the horizon. Trials whose walk never hits are
/// counted as censored.
template <class G>
WhichVertexFreq which_vertex_freq(const G& g, const std::vector<Vertex>& targets, Vertex start,
                                  std::int64_t T, std::int64_t trials, std::uint64_t seed,
                                  std::int64_t horizon = -1, double fit_constant_K = 1.0,
                                  std::int64_t min_hits = 100, int threads = 1) {
  if (targets.size() < 2) throw std::invalid_argument("which_vertex_freq: need >= 2 targets");
  const std::int64_t n = g.vertex_count();
  if (horizon < 0) horizon = 4 * n;  // hits beyond are censored
  VertexSet target_set(n);
  for (Vertex v : targets) target_set.insert(v);
  std::vector<std::int8_t> outcome(static_cast<std::size_t>(trials), -1);
  parallel_trials(trials, threads, [&](std::int64_t i) {
    const auto hit = first_visit_time(g, start, target_set, T + 1, horizon,
                                      Rng(seed, static_cast<std::uint64_t>(i)));
    if (hit.vertex) {
      for (std::size_t k = 0; k < targets.size(); ++k)
        if (targets[k] == *hit.vertex) outcome[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(k);
    }
  });
  WhichVertexFreq out;
  out.targets = targets;
  out.trials = trials;
  out.seed = seed;
  out.hits.assign(targets.size(), 0);
  for (auto o : outcome) {
    if (o < 0)
      ++out.censored;
    else
      ++out.hits[static_cast<std::size_t>(o)];
  }
  out.conditioned = trials - out.censored;
  if (out.conditioned < min_hits)
    throw InsufficientData("which_vertex_freq: only " + std::to_string(out.conditioned) +
                           " conditioned hits");
  out.freq.resize(targets.size());
  out.se.resize(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double f = static_cast<double>(out.hits[k]) / static_cast<double>(out.conditioned);
    out.freq[k] = f;
    out.se[k] = std::sqrt(f * (1 - f) / static_cast<double>(out.conditioned));
  }
  const double L = 2.0 * fit_constant_K * static_cast<double>(T) * std::log(static_cast<double>(n));
  out.xi = L * static_cast<double>(targets.size()) / static_cast<double>(n);
  return out;
}

/// Probability that a walk started at a vertex at the given distance from v
/// reaches {v} union N(v) within L lazy steps. Reported, never asserted
/// against a constant; the interesting regime is distance 2 vs distance 3.
template <class G>
Estimate neighborhood_return_prob(const G& g, Vertex v, int start_distance, std::int64_t L,
                                  std::int64_t trials, std::uint64_t seed, int threads = 1) {
  const std::int64_t n = g.vertex_count();
  VertexSet ball(n, {v});
  for (int i = 0; i < g.degree(v); ++i) ball.insert(g.neighbor(v, i));
  std::vector<Vertex> starts;
  {
    const auto dist = bfs_distances(g, v, start_distance + 1);
    for (std::int64_t u = 0; u < n; ++u)
      if (dist[static_cast<std::size_t>(u)] == start_distance)
        starts.push_back(static_cast<Vertex>(u));
  }
  if (starts.empty()) throw std::invalid_argument("neighborhood_return_prob: no vertex at that distance");
  std::vector<std::int8_t> hit(static_cast<std::size_t>(trials), 0);
  parallel_trials(trials, threads, [&](std::int64_t i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const Vertex start = starts[rng.below(starts.size())];
    const auto first = first_visit_time(g, start, ball, 1, L, rng);
    hit[static_cast<std::size_t>(i)] = first.step.has_value() ? 1 : 0;
  });
  std::int64_t hits = 0;
  for (auto h : hit) hits += h;
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return Estimate{p, std::sqrt(p * (1 - p) / static_cast<double>(trials)), trials, seed};
}

enum class ContractionMode { start_specific, stationarized };

struct ContractionCheck {
  double prob_full;        // Pr(all of S avoided) in the source graph
  double prob_contracted;  // Pr(gamma avoided) in the contraction
  double difference;
};

/// Exact comparison of set avoidance in H against vertex avoidance of gamma
/// in Gamma(H, S). In start_specific mode both walks are conditioned from
/// step 0 (no burn-in) and the probabilities agree exactly; in stationarized
/// mode both walks run burn_in full steps first and the gap is O(|S|/n^3).
inline ContractionCheck contraction_check(const Graph& g, const VertexSet& S, Vertex start,
                                          std::int64_t burn_in, std::int64_t t,
                                          ContractionMode mode) {
  if (g.vertex_count() > (std::int64_t{1} << 12))
    throw SizeExceeded("contraction_check: exact mode requires n <= 4096");
  if (S.contains(start)) throw std::invalid_argument("contraction_check: start must avoid S");
  const auto contraction = contract(g, S);
  const DenseChain full = dense_chain(g);
  const DenseChain reduced = dense_chain(contraction.graph);
  const std::int64_t b = mode == ContractionMode::start_specific ? 0 : burn_in;
  VertexSet gamma_only(contraction.graph.vertex_count(), {contraction.gamma});
  const double ph = avoidance_prob_exact(full, S, start, b, t);
  const double pg =
      avoidance_prob_exact(reduced, gamma_only, contraction.to_new[start], b, t);
  return ContractionCheck{ph, pg, std::abs(ph - pg)};
}

struct PairIndependence {
  double joint = 0;         // Pr(v, w both unvisited in the window)
  double product = 0;       // product of the marginals
  double ratio = 0;         // joint / product
  double log_ratio_se = 0;  // delta-method standard error of ln(ratio)
  double ci_low = 0, ci_high = 0;
  double band_low = 0, band_high = 0;  // 1 -+ c log d / d^2
  bool flagged = false;                // CI disjoint from the band
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Estimate Pr(v, w in U_0) against the product of marginals, where U_0 is
/// the set unvisited during lazy steps [T, 2t]. The near-independence claim
/// assumes dist(v, w) >= 5; callers may still run closer pairs and just read
/// the ratio.
template <class G>
PairIndependence pair_independence(const G& g, Vertex v, Vertex w, std::int64_t t_speedy,
                                   std::int64_t T, std::int64_t trials, std::uint64_t seed,
                                   double band_constant = 10.0, Vertex start = 0,
                                   int threads = 1) {
  if (v == w) throw std::invalid_argument("pair_independence: v == w");
  const std::int64_t horizon = 2 * t_speedy;
  std::vector<std::int8_t> cell(static_cast<std::size_t>(trials));
  parallel_trials(trials, threads, [&](std::int64_t i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    WalkState s{start, 0, 0, rng};
    bool hit_v = (T <= 0 && start == v), hit_w = (T <= 0 && start == w);
    for (std::int64_t step = 1; step <= horizon && !(hit_v && hit_w); ++step) {
      lazy_step(g, s);
      if (step >= T) {
        hit_v = hit_v || s.position == v;
        hit_w = hit_w || s.position == w;
      }
    }
    cell[static_cast<std::size_t>(i)] =
        static_cast<std::int8_t>((hit_v ? 0 : 2) | (hit_w ? 0 : 1));
  });
  std::int64_t counts[4] = {0, 0, 0, 0};  // index: bit1 = v vacant, bit0 = w vacant
  for (auto c : cell) ++counts[c];
  PairIndependence out;
  out.trials = trials;
  out.seed = seed;
  const auto N = static_cast<double>(trials);
  const double p11 = static_cast<double>(counts[3]) / N;
  const double pv = static_cast<double>(counts[3] + counts[2]) / N;
  const double pw = static_cast<double>(counts[3] + counts[1]) / N;
  out.joint = p11;
  out.product = pv * pw;
  if (counts[3] == 0 || pv == 0 || pw == 0)
    throw InsufficientData("pair_independence: no joint-vacant trials observed");
  out.ratio = p11 / (pv * pw);
  // delta method for ln r = ln p11 - ln pv - ln pw over the multinomial
  // cells a = both vacant, b = only v, c = only w
  const double a = static_cast<double>(counts[3]) / N;
  const double b = static_cast<double>(counts[2]) / N;
  const double c = static_cast<double>(counts[1]) / N;
  const double ga = 1 / a - 1 / (a + b) - 1 / (a + c);
  const double gb = -1 / (a + b);
  const double gc = -1 / (a + c);
  const double var_log = (ga * ga * a * (1 - a) + gb * gb * b * (1 - b) + gc * gc * c * (1 - c) -
                          2 * ga * gb * a * b - 2 * ga * gc * a * c - 2 * gb * gc * b * c) /
                         N;
  out.log_ratio_se = std::sqrt(std::max(var_log, 0.0));
  out.ci_low = out.ratio * std::exp(-3 * out.log_ratio_se);
  out.ci_high = out.ratio * std::exp(3 * out.log_ratio_se);
  if (g.regular()) {
    const double d = g.regular_degree();
    const double half = band_constant * std::log(d) / (d * d);
    out.band_low = 1 - half;
    out.band_high = 1 + half;
    out.flagged = out.ci_high < out.band_low || out.ci_low > out.band_high;
  }
  return out;
}

}  // namespace vacant
