// Synthetic data: tridiagonal precision matrices with shared support,
// multivariate normal sampling, and hierarchical-prior edge draws.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "logshift/matrix.hpp"
#include "logshift/penalty.hpp"
#include "logshift/rng.hpp"

namespace logshift {

struct SimConfig {
  int p = 100;
  int K = 3;
  std::vector<int> n;  // per-graph sample sizes
  std::uint64_t seed = 0;
  double diag_value = 1.0;
  double offdiag_lo = 0.4;
  double offdiag_hi = 0.6;
  double pd_margin = 0.1;

  void validate() const {
    if (p < 1 || K < 1) throw std::invalid_argument("SimConfig: p and K must be >= 1");
    if (n.size() != static_cast<size_t>(K))
      throw std::invalid_argument("SimConfig: n must have K entries");
    for (int nk : n)
      if (nk < 1) throw std::invalid_argument("SimConfig: sample sizes must be >= 1");
    if (!(diag_value > 0.0)) throw std::invalid_argument("SimConfig: diag_value must be > 0");
    if (!(0.0 < offdiag_lo && offdiag_lo <= offdiag_hi))
      throw std::invalid_argument("SimConfig: need 0 < offdiag_lo <= offdiag_hi");
    if (!(pd_margin > 0.0)) throw std::invalid_argument("SimConfig: pd_margin must be > 0");
  }
};

struct PriorConfig {
  double alpha = 1.0;
  double beta = 1.0;
  int K = 1;

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("PriorConfig: alpha and beta must be > 0");
    if (K < 1) throw std::invalid_argument("PriorConfig: K must be >= 1");
  }
};

// K tridiagonal precision matrices with identical support and per-graph
// values: off-diagonal magnitudes uniform on [lo,hi] with random sign, and
// the diagonal inflated where needed to strict diagonal dominance (which
// keeps the support exactly tridiagonal and the matrices PD).
inline std::vector<SymMatrix> gen_tridiag_precisions(const SimConfig& cfg) {
  cfg.validate();
  std::vector<SymMatrix> out;
  out.reserve(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(k));
    SymMatrix omega(cfg.p);
    for (Index i = 0; i < cfg.p; ++i) omega.set(i, i, cfg.diag_value);
    for (Index i = 0; i + 1 < cfg.p; ++i) {
      const double mag = rng.uniform(cfg.offdiag_lo, cfg.offdiag_hi);
      const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      omega.set(i, i + 1, sign * mag);
    }
    for (Index i = 0; i < cfg.p; ++i) {
      double row = 0.0;
      if (i > 0) row += std::abs(omega(i, i - 1));
      if (i + 1 < cfg.p) row += std::abs(omega(i, i + 1));
      if (omega(i, i) < row + cfg.pd_margin)
        omega.set(i, i, row + cfg.pd_margin);
    }
    out.push_back(std::move(omega));
  }
  return out;
}

// n iid rows from N(0, omega^{-1}): rows z ~ N(0, I) mapped through the
// Cholesky factor, x = L^{-T} z where omega = L L^T.
inline Matrix sample_mvn(const SymMatrix& omega, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_mvn: n must be >= 1");
  require_finite(omega, "sample_mvn");
  Eigen::LLT<Matrix> llt(omega.mat());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("sample_mvn: omega is not positive definite");
  const Index p = omega.dim();
  Rng rng(seed);
  Matrix x(n, p);
  Vector z(p);
  for (int i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) z[j] = rng.normal();
    x.row(i) = llt.matrixU().solve(z).transpose();
  }
  return x;
}

// Edge vectors from the hierarchical prior: tau ~ InverseGamma(alpha, beta),
// then K iid Laplace(tau) coefficients.
inline std::vector<EdgeVector> sample_prior_edges(const PriorConfig& cfg,
                                                  int count,
                                                  std::uint64_t seed) {
  cfg.validate();
  if (count < 0) throw std::invalid_argument("sample_prior_edges: count must be >= 0");
  Rng rng(seed);
  std::vector<EdgeVector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double tau = rng.inverse_gamma(cfg.alpha, cfg.beta);
    EdgeVector v(cfg.K);
    for (int k = 0; k < cfg.K; ++k) v[k] = rng.laplace(tau);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace logshift
