#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "vacant/chain.hpp"
#include "vacant/estimators.hpp"
#include "vacant/graph.hpp"
#include "vacant/multigraph.hpp"
#include "vacant/rng.hpp"

using namespace vacant;

namespace {

// oracle: absorption probabilities from the linear system of the birth-death
// chain on {0..ell} with absorbing ends and holding probability 1 - p - q
double absorption_linear_solve(double p, double q, int ell, int j) {
  const int n = ell + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  A(0, 0) = 1;
  b[0] = 1;
  A(ell, ell) = 1;
  b[ell] = 0;
  for (int i = 1; i < ell; ++i) {
    // h_i = q h_{i-1} + (1-p-q) h_i + p h_{i+1}
    A(i, i - 1) = -q;
    A(i, i) = p + q;
    A(i, i + 1) = -p;
  }
  return A.fullPivLu().solve(b)[j];
}

VertexSet random_proper_subset(std::int64_t n, std::int64_t size, Rng& rng) {
  VertexSet s(n);
  while (s.size() < size) s.insert(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n))));
  return s;
}

}  // namespace

TEST_CASE("lazy chain of a single edge has eigenvalues {0, 1} and gap 1") {
  auto g = Graph::from_edges(2, {{0, 1}});
  const auto chain = dense_chain(g);
  validate_chain(chain);
  const auto ev = chain_eigenvalues(chain);
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_gap(chain) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lazy Q_4 spectrum is 1 - k/4 with binomial multiplicities") {
  const auto chain = dense_chain(Graph::hypercube(4));
  validate_chain(chain);
  const auto ev = chain_eigenvalues(chain);
  std::map<int, int> mult;  // eigenvalue 1 - k/4 rounded to k
  for (int i = 0; i < 16; ++i) {
    const double lambda = ev[i];
    const int k = static_cast<int>(std::lround((1.0 - lambda) * 4));
    CHECK(lambda == doctest::Approx(1.0 - k / 4.0).epsilon(1e-10));
    ++mult[k];
  }
  CHECK(mult == std::map<int, int>{{0, 1}, {1, 4}, {2, 6}, {3, 4}, {4, 1}});
  // lazy spectrum is nonnegative
  CHECK(ev[0] >= -1e-10);
}

TEST_CASE("deflated power iteration agrees with the dense eigensolve") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto g = Graph::random_regular(40, 4, seed);
    const auto chain = dense_chain(g);
    CHECK(spectral_gap_power(chain) == doctest::Approx(spectral_gap(chain)).epsilon(1e-7));
  }
}

TEST_CASE("contraction cannot increase the second eigenvalue") {
  Rng rng(12);
  for (int rep = 0; rep < 12; ++rep) {
    auto g = Graph::random_regular(24 + 2 * (rep % 5), 3, 100 + static_cast<std::uint64_t>(rep));
    const std::int64_t n = g.vertex_count();
    auto s = random_proper_subset(n, 2 + static_cast<std::int64_t>(rng.below(5)), rng);
    const auto con = contract(g, s);
    const auto lam2 = [](const DenseChain& c) {
      const auto ev = chain_eigenvalues(c);
      return ev[ev.size() - 2];
    };
    REQUIRE(lam2(dense_chain(con.graph)) <= lam2(dense_chain(g)) + 1e-10);
  }
}

TEST_CASE("mixing time of the lazy single-edge chain is 1") {
  // the lazy one-edge chain is uniform after a single step
  auto g = Graph::from_edges(2, {{0, 1}});
  CHECK(mixing_time_exact(dense_chain(g)) == 1);
}

TEST_CASE("level chain matches the dense chain on Q_6") {
  const int d = 6;
  const auto lc = level_chain(d);
  const auto dc = dense_chain(Graph::hypercube(d));
  CHECK(mixing_time_exact(lc) == 56);
  CHECK(mixing_time_exact(dc) == 56);

  // return probabilities agree at every t <= 200
  Eigen::RowVectorXd level = Eigen::RowVectorXd::Zero(d + 1);
  level[0] = 1;
  Eigen::RowVectorXd dense = Eigen::RowVectorXd::Zero(64);
  dense[0] = 1;
  for (int t = 1; t <= 200; ++t) {
    level = level * lc.P;
    dense = dense * dc.P;
    REQUIRE(std::abs(level[0] - dense[0]) <= 1e-10);
  }
}

TEST_CASE("hypercube mixing times from the level chain (frozen oracle values)") {
  CHECK(mixing_time_exact(level_chain(8)) == 99);
  CHECK(mixing_time_exact(level_chain(10)) == 154);  // regression constant for Q_10
  CHECK(mixing_time_exact(level_chain(12)) == 220);
  CHECK(mixing_time_exact(level_chain(14)) == 298);
}

TEST_CASE("mixing time bound") {
  CHECK(mixing_time_bound(1.0, 16) == 1);
  CHECK(mixing_time_bound(0.1, 1024.0) == 198);  // ceil(3 * 10 ln 2 / -ln 0.9)
  CHECK_THROWS_AS(mixing_time_bound(0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(mixing_time_bound(-0.5, 16), std::invalid_argument);

  // bound dominates the exact value on every tested instance
  for (int d = 2; d <= 6; ++d) {
    const auto chain = dense_chain(Graph::hypercube(d));
    const auto exact = mixing_time_exact(chain);
    const auto bound = mixing_time_bound(spectral_gap(chain), std::ldexp(1.0, d));
    REQUIRE(exact <= bound);
  }

  // with gap 1/d and n = 2^d the bound grows like d^2
  const auto t1 = mixing_time_bound(1.0 / 8, std::ldexp(1.0, 8));
  const auto t2 = mixing_time_bound(1.0 / 16, std::ldexp(1.0, 16));
  const double ratio = static_cast<double>(t2) / static_cast<double>(t1);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("return sums on hypercubes (frozen oracle values)") {
  // independently computed by a separate level-chain implementation
  const struct {
    int d;
    std::int64_t T;
    double r;
  } expected[] = {
      {8, 99, 2.743786805422125},
      {10, 154, 2.440224291461310},
      {12, 220, 2.285556281127242},
      {14, 298, 2.207467969107577},
  };
  for (const auto& e : expected) {
    const auto lc = level_chain(e.d);
    const auto T = mixing_time_exact(lc);
    REQUIRE(T == e.T);
    CHECK(return_sum(lc, T) == doctest::Approx(e.r).epsilon(1e-9));
  }
}

TEST_CASE("return sum of the all-loop chain is T + 1") {
  MultiGraph mg(1);
  mg.add_edge(0, 0);
  mg.finalize();
  const auto chain = dense_chain(mg);
  CHECK(chain.P(0, 0) == 1.0);
  CHECK(return_sum(chain, 0, 37) == doctest::Approx(38.0));
}

TEST_CASE("return sum at the contracted vertex approaches 2 as d grows") {
  // gamma over a 3-dimensional subcube (8 vertices, 12 internal edges)
  auto r_gamma = [](int d) {
    auto g = Graph::hypercube(d);
    VertexSet s(g.vertex_count());
    for (Vertex v = 0; v < 8; ++v) s.insert(v);
    const auto con = contract(g, s);
    const auto chain = dense_chain(con.graph);
    const auto T = mixing_time_exact(level_chain(d));
    return return_sum(chain, con.gamma, T);
  };
  const double r8 = r_gamma(8), r10 = r_gamma(10), r12 = r_gamma(12);
  CHECK(r12 == doctest::Approx(3.527241).epsilon(1e-5));  // frozen oracle value, T = 220
  CHECK(r8 > r10);
  CHECK(r10 > r12);
  CHECK(r12 > 2.0);
}

TEST_CASE("first visit rate") {
  const auto p = first_visit_rate(2.2, 1024, 154);
  CHECK(p.value == doctest::Approx(4.43892e-4).epsilon(1e-4));
  CHECK(p.halfwidth == doctest::Approx(10.0 * 154.0 / 1024.0 * p.value).epsilon(1e-12));
  CHECK(first_visit_rate(1.0, 64, 10).value == doctest::Approx(1.0 / 64));
  CHECK_THROWS_AS(first_visit_rate(0.5, 64, 10), std::invalid_argument);
}

TEST_CASE("rate band covers the transient-only rate on Q_10") {
  // removing the stationary part of the return sum shifts p_v by less than
  // the reported half-width
  const auto lc = level_chain(10);
  const std::int64_t T = mixing_time_exact(lc);
  const double n = 1024.0;
  const double r_full = return_sum(lc, T);
  const double r_transient = r_full - static_cast<double>(T + 1) / n;
  const auto p = first_visit_rate(r_full, n, static_cast<double>(T));
  CHECK(std::abs(1.0 / (n * r_transient) - p.value) <= p.halfwidth);
}

TEST_CASE("caps and size guards are reported as typed failures") {
  CHECK_THROWS_AS(mixing_time_exact(dense_chain(Graph::hypercube(6)), 3), CapExceeded);
  CHECK_THROWS_AS(dense_chain(Graph::hypercube(15)), SizeExceeded);
  const auto chain = dense_chain(Graph::random_regular(40, 4, 1));
  CHECK_THROWS_AS(spectral_gap_power(chain, 2), NumericalFailure);
}

TEST_CASE("gambler's ruin closed form") {
  CHECK(gambler_ruin(0.6, 0.3, 5, 0) == doctest::Approx(1.0));
  CHECK(gambler_ruin(0.6, 0.3, 5, 5) == doctest::Approx(0.0));
  CHECK(gambler_ruin(2.0 / 3, 1.0 / 3, 3, 1) == doctest::Approx(3.0 / 7).epsilon(1e-14));
  CHECK_THROWS_AS(gambler_ruin(0.4, 0.4, 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(gambler_ruin(0.7, 0.4, 5, 2), std::invalid_argument);  // p + q > 1
  CHECK_THROWS_AS(gambler_ruin(0.5, 0.2, 5, 6), std::invalid_argument);

  // closed form equals the linear-system oracle; bound pi_j <= 2 xi^j
  Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const double p = 0.1 + 0.85 * rng.uniform01();
    double q = (1.0 - p) * rng.uniform01();
    if (std::abs(p - q) < 0.02) q = q / 2 + 0.03;
    if (p + q > 1) continue;
    const int ell = 2 + static_cast<int>(rng.below(40));
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(ell) + 1));
    const double closed = gambler_ruin(p, q, ell, j);
    const double solved = absorption_linear_solve(p, q, ell, j);
    REQUIRE(std::abs(closed - solved) <= 1e-12);
    if (q < p) REQUIRE(closed <= 2.0 * std::pow(q / p, j) + 1e-15);
  }
}

TEST_CASE("avoidance probability trivia") {
  const auto chain = dense_chain(Graph::hypercube(3));
  VertexSet s(8, {6, 7});
  CHECK(avoidance_prob_exact(chain, s, 0, 10, 5) == doctest::Approx(1.0));  // empty window
}

TEST_CASE("avoiding all neighbors of a star center means never moving") {
  // star K_{1,4}: center 0
  auto star = Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const auto chain = dense_chain(star);
  VertexSet leaves(5, {1, 2, 3, 4});
  for (int t = 1; t <= 12; ++t)
    REQUIRE(avoidance_prob_exact(chain, leaves, 0, 0, t) ==
            doctest::Approx(std::pow(0.5, t)).epsilon(1e-12));
}

TEST_CASE("exact avoidance matches Monte Carlo on a random 16-vertex graph") {
  auto g = Graph::random_regular(16, 4, 5);
  const auto chain = dense_chain(g);
  VertexSet s(16, {3, 11});
  const std::int64_t burn_in = 8, t = 40;
  const double exact = avoidance_prob_exact(chain, s, 0, burn_in, t);

  const int trials = 1000000;
  std::int64_t avoided = 0;
  for (int i = 0; i < trials; ++i) {
    WalkState w{0, 0, 0, Rng(40, static_cast<std::uint64_t>(i))};
    bool hit = false;
    for (std::int64_t step = 1; step <= t && !hit; ++step) {
      lazy_step(g, w);
      hit = step > burn_in && s.contains(w.position);
    }
    if (!hit) ++avoided;
  }
  const double sd = std::sqrt(exact * (1 - exact) * trials);
  CHECK(std::abs(avoided - exact * trials) <= 3 * sd);
}

TEST_CASE("avoidance curve agrees with pointwise evaluation") {
  const auto chain = dense_chain(Graph::hypercube(4));
  VertexSet s(16, {9});
  const auto curve = avoidance_curve_exact(chain, s, 0, 5, 60);
  CHECK(curve[0] == 1.0);
  for (std::int64_t t = 5; t <= 60; t += 11)
    REQUIRE(curve[static_cast<std::size_t>(t - 5)] ==
            doctest::Approx(avoidance_prob_exact(chain, s, 0, 5, t)).epsilon(1e-13));
  // survival is non-increasing
  for (std::size_t i = 1; i < curve.size(); ++i) REQUIRE(curve[i] <= curve[i - 1] + 1e-15);
}

TEST_CASE("first-hit split respects an automorphism that swaps the targets") {
  // swapping coordinates 0 and 1 of Q_4 fixes vertex 0 and swaps 1 <-> 2
  const auto chain = dense_chain(Graph::hypercube(4));
  const auto split = first_hit_split_exact(chain, {1, 2}, 0, 10, 200);
  CHECK(split[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(split[0] + split[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chain validation flags corrupted rows") {
  auto chain = dense_chain(Graph::hypercube(3));
  chain.P(0, 0) += 1e-9;
  CHECK_THROWS_AS(validate_chain(chain), NumericalFailure);
}

TEST_CASE("level chain rows are stochastic") {
  for (int d : {1, 5, 14, 30}) {
    const auto lc = level_chain(d);
    for (int k = 0; k <= d; ++k) REQUIRE(lc.P.row(k).sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(level_chain(31), std::invalid_argument);
}
