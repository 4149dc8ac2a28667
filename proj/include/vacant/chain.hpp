#pragma once

// Exact Markov-chain computations for the lazy walk: dense transition
// matrices (any graph), the Hamming-level projection for hypercubes,
// spectra, mixing times, return sums R_v, first-visit rates, taboo
// (avoidance) probabilities, and birth-death absorption.
//
// Matrix powering is done by repeated multiplication, never through an
// eigendecomposition, so taboo-chain support stays exact. Row-sum drift is
// monitored at every powering step and reported as a failure rather than
// renormalized away.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vacant/errors.hpp"
#include "vacant/graph.hpp"
#include "vacant/multigraph.hpp"
#include "vacant/vertex_set.hpp"

namespace vacant {

inline constexpr std::int64_t kDenseChainMaxVertices = std::int64_t{1} << 14;
inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr std::int64_t kMixingStepCap = 1'000'000;

template <class Scalar = double>
struct DenseChainT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Matrix P;   // row-stochastic lazy transitions
  Vector pi;  // stationary distribution, pi_v = deg(v) / 2m

  std::int64_t size() const { return P.rows(); }
};
using DenseChain = DenseChainT<double>;

/// Lazy walk projected onto Hamming distance from a fixed vertex of Q_d:
/// from level k, stay 1/2, step down k/(2d), step up (d-k)/(2d). Level 0 is
/// the fixed vertex, so level-0 return probabilities equal P^t_v(v).
template <class Scalar = double>
struct LevelChainT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  int dim = 0;
  Matrix P;  // (d+1) x (d+1)
};
using LevelChain = LevelChainT<double>;

template <class Scalar>
void validate_chain(const DenseChainT<Scalar>& c, Scalar tol = kStochasticTolerance) {
  const auto n = c.P.rows();
  const Scalar row_err = (c.P.rowwise().sum().array() - Scalar(1)).abs().maxCoeff();
  if (row_err > tol)
    throw NumericalFailure("chain rows deviate from 1 by " + std::to_string(row_err));
  Scalar bal = 0;
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = 0; v < u; ++v)
      bal = std::max(bal, std::abs(c.pi[u] * c.P(u, v) - c.pi[v] * c.P(v, u)));
  if (bal > tol) throw NumericalFailure("detailed balance violated by " + std::to_string(bal));
}

inline DenseChain dense_chain(const Graph& g) {
  const std::int64_t n = g.vertex_count();
  if (n > kDenseChainMaxVertices) throw SizeExceeded("dense_chain: graph too large");
  DenseChain c;
  c.P = DenseChain::Matrix::Zero(n, n);
  c.pi = DenseChain::Vector::Zero(n);
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  for (std::int64_t v = 0; v < n; ++v) {
    const auto vv = static_cast<Vertex>(v);
    const int dv = g.degree(vv);
    c.P(v, v) = 0.5;
    for (int i = 0; i < dv; ++i) c.P(v, g.neighbor(vv, i)) += 0.5 / dv;
    c.pi[v] = dv / two_m;
  }
  return c;
}

inline DenseChain dense_chain(const MultiGraph& g) {
  const std::int64_t n = g.vertex_count();
  if (n > kDenseChainMaxVertices) throw SizeExceeded("dense_chain: graph too large");
  DenseChain c;
  c.P = DenseChain::Matrix::Zero(n, n);
  c.pi = DenseChain::Vector::Zero(n);
  double two_m = 0;
  for (std::int64_t v = 0; v < n; ++v) two_m += static_cast<double>(g.degree(static_cast<Vertex>(v)));
  for (std::int64_t v = 0; v < n; ++v) {
    const auto vv = static_cast<Vertex>(v);
    const double deg = static_cast<double>(g.degree(vv));
    c.P(v, v) = 0.5 + 0.5 * (2.0 * g.loop_count(vv)) / deg;
    for (const auto& e : g.edges(vv)) c.P(v, e.to) += 0.5 * e.multiplicity / deg;
    c.pi[v] = deg / two_m;
  }
  return c;
}

template <class Scalar = double>
LevelChainT<Scalar> level_chain(int d) {
  if (d < 1 || d > 30) throw std::invalid_argument("level_chain: d must be in [1, 30]");
  LevelChainT<Scalar> c;
  c.dim = d;
  c.P = LevelChainT<Scalar>::Matrix::Zero(d + 1, d + 1);
  for (int k = 0; k <= d; ++k) {
    c.P(k, k) = Scalar(0.5);
    if (k > 0) c.P(k, k - 1) = Scalar(k) / Scalar(2 * d);
    if (k < d) c.P(k, k + 1) = Scalar(d - k) / Scalar(2 * d);
  }
  return c;
}

/// Eigenvalues of the (reversible) lazy chain, ascending, computed on the
/// symmetrized form D^{1/2} P D^{-1/2}.
template <class Scalar>
typename DenseChainT<Scalar>::Vector chain_eigenvalues(const DenseChainT<Scalar>& c) {
  using Matrix = typename DenseChainT<Scalar>::Matrix;
  const auto n = c.P.rows();
  const auto sqrt_pi = c.pi.array().sqrt();
  Matrix S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) S(i, j) = sqrt_pi[i] * c.P(i, j) / sqrt_pi[j];
  S = ((S + S.transpose()) / Scalar(2)).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  return solver.eigenvalues();
}

template <class Scalar>
Scalar spectral_gap(const DenseChainT<Scalar>& c) {
  if (c.P.rows() == 1) return Scalar(1);
  const auto ev = chain_eigenvalues(c);
  return Scalar(1) - ev[ev.size() - 2];
}

/// Second-eigenvalue gap by power iteration on the symmetrized chain with
/// the top eigenvector deflated. For sizes where a full eigensolve is too
/// expensive.
template <class Scalar>
Scalar spectral_gap_power(const DenseChainT<Scalar>& c, int max_iters = 200000,
                          Scalar tol = Scalar(1e-13)) {
  using Vector = typename DenseChainT<Scalar>::Vector;
  const auto n = c.P.rows();
  if (n == 1) return Scalar(1);
  Vector v1 = c.pi.array().sqrt();
  v1.normalize();
  Vector x = Vector::LinSpaced(n, Scalar(1), Scalar(2));
  x -= v1 * v1.dot(x);
  x.normalize();
  Scalar lambda = 0, prev = 2;
  for (int it = 0; it < max_iters; ++it) {
    // y = S x with S = D^{1/2} P D^{-1/2}
    Vector y = (c.pi.array().sqrt() *
                (c.P * (x.array() / c.pi.array().sqrt()).matrix()).array())
                   .matrix();
    y -= v1 * v1.dot(y);
    lambda = x.dot(y);
    const Scalar norm = y.norm();
    if (norm == Scalar(0)) return Scalar(1);
    x = y / norm;
    if (std::abs(lambda - prev) <= tol) return Scalar(1) - lambda;
    prev = lambda;
  }
  throw NumericalFailure("spectral_gap_power: no convergence after " +
                         std::to_string(max_iters) + " iterations, last lambda_2 " +
                         std::to_string(lambda));
}

namespace detail {
template <class Matrix>
void check_row_drift(const Matrix& M) {
  const double err = (M.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (err > kStochasticTolerance)
    throw NumericalFailure("row-sum drift " + std::to_string(err) + " during powering");
}
}  // namespace detail

/// Smallest t >= 1 with max_{x,y} |P^t_x(y) - pi_y| <= n^-3, by repeated
/// dense multiplication.
inline std::int64_t mixing_time_exact(const DenseChain& c, std::int64_t cap = kMixingStepCap) {
  const auto n = c.P.rows();
  const double threshold = 1.0 / (static_cast<double>(n) * n * n);
  DenseChain::Matrix M = c.P;
  DenseChain::Matrix next(n, n);
  for (std::int64_t t = 1; t <= cap; ++t) {
    const double dev = (M - DenseChain::Vector::Ones(n) * c.pi.transpose()).array().abs().maxCoeff();
    if (dev <= threshold) return t;
    next.noalias() = M * c.P;
    M.swap(next);
    detail::check_row_drift(M);
  }
  throw CapExceeded("mixing_time_exact: cap " + std::to_string(cap) + " reached");
}

/// Hypercube variant: by vertex transitivity it is enough to track the
/// distance classes around one vertex; the per-vertex deviation of class j
/// is |x_j / C(d,j) - 1/n|.
inline std::int64_t mixing_time_exact(const LevelChain& c, std::int64_t cap = kMixingStepCap) {
  const int d = c.dim;
  const double n = std::ldexp(1.0, d);
  const double threshold = 1.0 / (n * n * n);
  Eigen::VectorXd binom(d + 1);
  binom[0] = 1;
  for (int j = 1; j <= d; ++j) binom[j] = binom[j - 1] * (d - j + 1) / j;
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(d + 1);
  x[0] = 1;
  double worst = 1;
  for (std::int64_t t = 1; t <= cap; ++t) {
    x = x * c.P;
    worst = 0;
    for (int j = 0; j <= d; ++j) worst = std::max(worst, std::abs(x[j] / binom[j] - 1.0 / n));
    if (worst <= threshold) return t;
  }
  throw CapExceeded("mixing_time_exact(level): cap reached, deviation " + std::to_string(worst));
}

/// Smallest t with (1 - gap)^t <= n^-3.
inline std::int64_t mixing_time_bound(double gap, double n) {
  if (!(gap > 0) || gap > 1) throw std::invalid_argument("mixing_time_bound: gap must be in (0, 1]");
  if (!(n >= 2)) throw std::invalid_argument("mixing_time_bound: n must be >= 2");
  if (gap == 1.0) return 1;
  const double rate = -std::log1p(-gap);
  const double target = 3.0 * std::log(n);
  auto t = static_cast<std::int64_t>(std::ceil(target / rate));
  while (t > 1 && static_cast<double>(t - 1) * rate >= target) --t;
  while (static_cast<double>(t) * rate < target) ++t;
  return t;
}

/// R_v = sum_{k=0}^{T} P^k_v(v) for the lazy walk on Q_d.
inline double return_sum(const LevelChain& c, std::int64_t T) {
  if (T < 0) throw std::invalid_argument("return_sum: T must be >= 0");
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(c.dim + 1);
  x[0] = 1;
  double r = 1.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    x = x * c.P;
    r += x[0];
  }
  return r;
}

inline double return_sum(const DenseChain& c, Vertex v, std::int64_t T) {
  if (T < 0) throw std::invalid_argument("return_sum: T must be >= 0");
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(c.P.rows());
  x[v] = 1;
  double r = 1.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    x = x * c.P;
    r += x[v];
  }
  return r;
}

/// First-visit rate p_v = 1 / (n R_v) with the multiplicative uncertainty
/// carried as an explicit half-width, band_constant * T/n * p_v.
struct RateBand {
  double value;
  double halfwidth;
  double low() const { return value - halfwidth; }
  double high() const { return value + halfwidth; }
};

inline RateBand first_visit_rate(double r_v, double n, double T, double band_constant = 10.0) {
  if (r_v < 1.0) throw std::invalid_argument("first_visit_rate: R_v must be >= 1");
  const double p = 1.0 / (n * r_v);
  return RateBand{p, band_constant * (T / n) * p};
}

/// Absorption probability at 0 before ell for the biased walk with right
/// and left step probabilities p and q (holding allowed, p + q <= 1):
/// pi_j = (xi^j - xi^ell) / (1 - xi^ell), xi = q/p. The symmetric case
/// p == q is rejected, the closed form is singular there.
inline double gambler_ruin(double p, double q, int ell, int j) {
  if (!(p > 0) || q < 0 || p + q > 1 + 1e-15) throw std::invalid_argument("gambler_ruin: need p > 0, q >= 0, p + q <= 1");
  if (ell < 1 || j < 0 || j > ell) throw std::invalid_argument("gambler_ruin: need 0 <= j <= ell");
  if (p == q) throw std::invalid_argument("gambler_ruin: p == q unsupported");
  const double xi = q / p;
  if (xi < 1.0) {
    const double num = std::pow(xi, j) - std::pow(xi, ell);
    return num / (1.0 - std::pow(xi, ell));
  }
  // xi > 1: scale by xi^-ell to avoid overflow
  const double num = std::pow(xi, j - ell) - 1.0;
  return num / (std::pow(xi, -ell) - 1.0);
}

namespace detail {
inline Eigen::RowVectorXd start_row(const DenseChain& c, Vertex start) {
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(c.P.rows());
  x[start] = 1;
  return x;
}
}  // namespace detail

/// Probability that the lazy walk from `start` makes no visit to `taboo` at
/// any step s with burn_in < s <= t. Visits during the burn-in window do not
/// count; with t <= burn_in the window is empty and the result is 1.
inline double avoidance_prob_exact(const DenseChain& c, const VertexSet& taboo, Vertex start,
                                   std::int64_t burn_in, std::int64_t t) {
  if (c.size() > kDenseChainMaxVertices) throw SizeExceeded("avoidance_prob_exact");
  const auto members = taboo.to_vector();
  Eigen::RowVectorXd x = detail::start_row(c, start);
  for (std::int64_t s = 1; s <= t; ++s) {
    x = x * c.P;
    if (s > burn_in)
      for (Vertex v : members) x[v] = 0;
  }
  return x.sum();
}

/// Avoidance probabilities for every t in [burn_in, tmax] in one sweep;
/// entry k is the probability for t = burn_in + k (entry 0 is 1).
inline std::vector<double> avoidance_curve_exact(const DenseChain& c, const VertexSet& taboo,
                                                 Vertex start, std::int64_t burn_in,
                                                 std::int64_t tmax) {
  if (burn_in > tmax) throw std::invalid_argument("avoidance_curve_exact: burn_in > tmax");
  const auto members = taboo.to_vector();
  Eigen::RowVectorXd x = detail::start_row(c, start);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(tmax - burn_in) + 1);
  for (std::int64_t s = 1; s <= burn_in; ++s) x = x * c.P;
  curve.push_back(1.0);
  for (std::int64_t s = burn_in + 1; s <= tmax; ++s) {
    x = x * c.P;
    for (Vertex v : members) x[v] = 0;
    curve.push_back(x.sum());
  }
  return curve;
}

/// Exact law of which target receives the first visit in (burn_in, horizon],
/// conditioned on some target being hit by the horizon. Computed by powering
/// the taboo chain and collecting the absorbed mass per target.
inline std::vector<double> first_hit_split_exact(const DenseChain& c,
                                                 const std::vector<Vertex>& targets, Vertex start,
                                                 std::int64_t burn_in, std::int64_t horizon) {
  if (targets.size() < 2) throw std::invalid_argument("first_hit_split_exact: need >= 2 targets");
  Eigen::RowVectorXd x = detail::start_row(c, start);
  for (std::int64_t s = 1; s <= burn_in; ++s) x = x * c.P;
  // mass sitting on a target at the end of the burn-in never produces a
  // "first visit after burn-in" at that position; it keeps evolving
  std::vector<double> absorbed(targets.size(), 0.0);
  for (std::int64_t s = burn_in + 1; s <= horizon; ++s) {
    x = x * c.P;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      absorbed[i] += x[targets[i]];
      x[targets[i]] = 0;
    }
  }
  double total = 0;
  for (double a : absorbed) total += a;
  if (total <= 0) throw InsufficientData("first_hit_split_exact: hit probability is zero");
  for (double& a : absorbed) a /= total;
  return absorbed;
}

}  // namespace vacant
