// Scaled ADMM for the weighted sparse-group graphical Lasso subproblem with
// optional spectral caps: consensus split Theta = Z, likelihood on the Theta
// side, per-edge penalties on the Z side.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "logshift/objective.hpp"

namespace logshift {

struct AdmmConfig {
  double rho = 1.0;
  int max_iter = 2000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-6;
  std::vector<double> b;  // per-graph spectral caps; empty means all +inf

  void validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("AdmmConfig: rho must be > 0");
    if (max_iter < 1) throw std::invalid_argument("AdmmConfig: max_iter must be >= 1");
    if (!(eps_abs > 0.0) || !(eps_rel > 0.0))
      throw std::invalid_argument("AdmmConfig: tolerances must be > 0");
  }

  double cap(int k) const { return b.empty() ? kInf : b[k]; }
};

// Symmetric nonnegative per-edge weights with a structurally zero diagonal.
class WeightMatrix {
 public:
  explicit WeightMatrix(Index p) : w_(Matrix::Zero(p, p)) {}

  static WeightMatrix constant(Index p, double value) {
    WeightMatrix w(p);
    for (Index i = 0; i < p; ++i)
      for (Index j = i + 1; j < p; ++j) w.set(i, j, value);
    return w;
  }

  Index dim() const { return w_.rows(); }
  double operator()(Index i, Index j) const { return w_(i, j); }

  void set(Index i, Index j, double v) {
    if (i == j) throw std::invalid_argument("WeightMatrix: diagonal is fixed zero");
    if (!(v >= 0.0)) throw std::invalid_argument("WeightMatrix: weights must be >= 0");
    w_(i, j) = v;
    w_(j, i) = v;
  }

 private:
  Matrix w_;
};

// argmin over {Theta > 0, ||Theta||_op <= cap} of
//   (n_k/2)(<S^(k), Theta> - log det Theta) + (rho/2)||Theta - target||_F^2.
// Eigendecompose M = rho*target - (n_k/2) S^(k); per eigenvalue the solution
// is (lambda + sqrt(lambda^2 + 2 n_k rho)) / (2 rho), clamped above at cap.
// The per-eigenvalue objective is convex on (0, inf), so clamping the
// unconstrained scalar minimizer is exact.
inline SymMatrix theta_update(const CovarianceSet& cov, int k,
                              const SymMatrix& target, double rho, double cap) {
  const double nk = cov.n[k];
  const SymMatrix M = SymMatrix::from_lower(
      rho * target.mat() - 0.5 * nk * cov.S[k].mat());
  EigenSystem es = sym_eigen(M);
  Vector theta(es.values.size());
  for (Index j = 0; j < theta.size(); ++j) {
    const double lam = es.values[j];
    double t = (lam + std::sqrt(lam * lam + 2.0 * nk * rho)) / (2.0 * rho);
    if (std::isfinite(cap) && t > cap) t = cap;
    theta[j] = t;
  }
  return SymMatrix::from_lower(es.vectors * theta.asDiagonal() *
                               es.vectors.transpose());
}

// Z-side subproblem: minimize sum_{i<j} w_ij f(Z_ij) + (rho/2)||Z - V||_F^2
// with V = Theta + U. The Frobenius term counts each unordered pair twice,
// so the per-pair prox step is w_ij / (2 rho). Diagonals pass through
// unpenalized.
inline std::vector<SymMatrix> z_update(const std::vector<SymMatrix>& theta_plus_u,
                                       const WeightMatrix& w,
                                       const PenaltySpec& spec, double rho) {
  const Index p = theta_plus_u.front().dim();
  const int K = static_cast<int>(theta_plus_u.size());
  std::vector<SymMatrix> z(K, SymMatrix(p));
  for (int k = 0; k < K; ++k)
    for (Index i = 0; i < p; ++i) z[k].set(i, i, theta_plus_u[k](i, i));
  EdgeVector v(K);
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) {
      for (int k = 0; k < K; ++k) v[k] = theta_plus_u[k](i, j);
      const EdgeVector zij = prox_sparse_group(spec, v, w(i, j) / (2.0 * rho));
      for (int k = 0; k < K; ++k) z[k].set(i, j, zij[k]);
    }
  return z;
}

struct AdmmResult {
  PrecisionSet z;      // reported solution, exactly sparse
  PrecisionSet theta;  // likelihood-side iterate, strictly positive definite
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

// Minimizes sum_k (n_k/2)(<S,Omega> - log det Omega) + sum_{i<j} w_ij f(Omega_ij)
// over the capped positive definite cone.
inline AdmmResult solve_weighted_ggl(const CovarianceSet& cov,
                                     const WeightMatrix& w,
                                     const PenaltySpec& spec,
                                     const AdmmConfig& cfg,
                                     const std::optional<PrecisionSet>& warm = {}) {
  cfg.validate();
  const Index p = cov.p;
  const int K = cov.K;
  const double rho = cfg.rho;

  std::vector<SymMatrix> z =
      warm ? warm->omega : PrecisionSet::identity(K, p).omega;
  std::vector<SymMatrix> u(K, SymMatrix(p));
  std::vector<SymMatrix> theta(K, SymMatrix(p));

  const double eps_base = cfg.eps_abs * static_cast<double>(p) *
                          std::sqrt(static_cast<double>(K));
  int iter = 0;
  double primal = kInf, dual = kInf;
  bool converged = false;

  while (iter < cfg.max_iter) {
    ++iter;
    for (int k = 0; k < K; ++k) {
      const SymMatrix target = SymMatrix::from_lower(z[k].mat() - u[k].mat());
      theta[k] = theta_update(cov, k, target, rho, cfg.cap(k));
    }

    std::vector<SymMatrix> theta_plus_u(K, SymMatrix(p));
    for (int k = 0; k < K; ++k)
      theta_plus_u[k] = SymMatrix::from_lower(theta[k].mat() + u[k].mat());
    std::vector<SymMatrix> z_prev = std::move(z);
    z = z_update(theta_plus_u, w, spec, rho);

    double pr2 = 0.0, du2 = 0.0, tn2 = 0.0, zn2 = 0.0, un2 = 0.0;
    for (int k = 0; k < K; ++k) {
      u[k] = SymMatrix::from_lower(u[k].mat() + theta[k].mat() - z[k].mat());
      pr2 += (theta[k].mat() - z[k].mat()).squaredNorm();
      du2 += (z[k].mat() - z_prev[k].mat()).squaredNorm();
      tn2 += theta[k].mat().squaredNorm();
      zn2 += z[k].mat().squaredNorm();
      un2 += u[k].mat().squaredNorm();
    }
    primal = std::sqrt(pr2);
    dual = rho * std::sqrt(du2);
    const double eps_pri =
        eps_base + cfg.eps_rel * std::max(std::sqrt(tn2), std::sqrt(zn2));
    const double eps_dual = eps_base + cfg.eps_rel * rho * std::sqrt(un2);
    if (primal <= eps_pri && dual <= eps_dual) {
      converged = true;
      break;
    }
  }

  return {PrecisionSet::make(std::move(z)), PrecisionSet::make(std::move(theta)),
          iter, primal, dual, converged};
}

}  // namespace logshift
