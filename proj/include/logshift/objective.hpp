// Problem data (covariances, precision estimates, hyperparameters) and exact
// evaluation of the penalized negative log-likelihood and its majorant.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "logshift/matrix.hpp"
#include "logshift/penalty.hpp"

namespace logshift {

// The K sample covariance matrices with their sample sizes; the solver's
// sufficient statistic.
struct CovarianceSet {
  int K = 0;
  Index p = 0;
  std::vector<SymMatrix> S;
  std::vector<double> n;

  static CovarianceSet make(std::vector<SymMatrix> S, std::vector<double> n) {
    if (S.empty() || S.size() != n.size())
      throw std::invalid_argument("CovarianceSet: need K >= 1 matrices with K sample sizes");
    const Index p = S.front().dim();
    for (const auto& s : S) {
      if (s.dim() != p)
        throw std::invalid_argument("CovarianceSet: dimension mismatch");
      for (Index i = 0; i < p; ++i)
        if (s(i, i) < 0.0)
          throw std::invalid_argument("CovarianceSet: negative diagonal entry");
    }
    for (double nk : n)
      if (!(nk > 0.0))
        throw std::invalid_argument("CovarianceSet: sample sizes must be positive");
    CovarianceSet cov;
    cov.K = static_cast<int>(S.size());
    cov.p = p;
    cov.S = std::move(S);
    cov.n = std::move(n);
    return cov;
  }
};

// The K symmetric precision estimates; feasible for evaluation iff every
// matrix is positive definite.
struct PrecisionSet {
  int K = 0;
  Index p = 0;
  std::vector<SymMatrix> omega;

  static PrecisionSet make(std::vector<SymMatrix> omega) {
    if (omega.empty())
      throw std::invalid_argument("PrecisionSet: need K >= 1 matrices");
    const Index p = omega.front().dim();
    for (const auto& m : omega)
      if (m.dim() != p)
        throw std::invalid_argument("PrecisionSet: dimension mismatch");
    PrecisionSet ps;
    ps.K = static_cast<int>(omega.size());
    ps.p = p;
    ps.omega = std::move(omega);
    return ps;
  }

  static PrecisionSet identity(int K, Index p) {
    std::vector<SymMatrix> m(K, SymMatrix::identity(p));
    return make(std::move(m));
  }
};

inline EdgeVector edge_at(const PrecisionSet& om, Index i, Index j) {
  EdgeVector v(om.K);
  for (int k = 0; k < om.K; ++k) v[k] = om.omega[k](i, j);
  return v;
}

// (gamma, beta, nu, b): penalty level, nonconvexity shift, l1/l2 mix,
// spectral caps. beta and the b_k admit +inf.
struct Hyperparams {
  double gamma = 0.0;
  double beta = kInf;
  double nu = 1.0;
  std::vector<double> b;  // per-graph spectral caps; empty means all +inf

  void validate(int K) const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("Hyperparams: gamma must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("Hyperparams: beta must be > 0");
    if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("Hyperparams: nu must be in [0,1]");
    if (!b.empty() && b.size() != static_cast<size_t>(K))
      throw std::invalid_argument("Hyperparams: b must have K entries");
    for (double bk : b)
      if (!(bk > 0.0)) throw std::invalid_argument("Hyperparams: b entries must be > 0");
  }

  double cap(int k) const { return b.empty() ? kInf : b[k]; }
  bool all_caps_finite(int K) const {
    if (b.empty()) return false;
    for (int k = 0; k < K; ++k)
      if (std::isinf(b[k])) return false;
    return true;
  }
};

// L_k = (n_k/2) (log det Omega - <S, Omega>), trace inner product.
inline double log_likelihood(const CovarianceSet& cov, int k,
                             const SymMatrix& omega_k) {
  const double logdet = chol_logdet(omega_k);
  const double inner = cov.S[k].mat().cwiseProduct(omega_k.mat()).sum();
  return 0.5 * cov.n[k] * (logdet - inner);
}

// F = -sum_k L_k + gamma * sum_{i<j} beta log(1 + f(Omega_ij)/beta).
// Each unordered pair is penalized once; diagonals are unpenalized.
inline double objective_value(const CovarianceSet& cov, const Hyperparams& hp,
                              const PrecisionSet& om) {
  double val = 0.0;
  for (int k = 0; k < cov.K; ++k) val -= log_likelihood(cov, k, om.omega[k]);
  if (hp.gamma > 0.0) {
    const PenaltySpec spec = PenaltySpec::make(hp.nu, om.K);
    for (Index i = 0; i < om.p; ++i)
      for (Index j = i + 1; j < om.p; ++j)
        val += hp.gamma * logshift_value(hp.beta, f_value(spec, edge_at(om, i, j)));
  }
  return val;
}

// Majorant of F linearized at the anchor, including the additive constant, so
// that surrogate_value(cov, hp, x, x) == objective_value(cov, hp, x).
inline double surrogate_value(const CovarianceSet& cov, const Hyperparams& hp,
                              const PrecisionSet& om,
                              const PrecisionSet& anchor) {
  double val = 0.0;
  for (int k = 0; k < cov.K; ++k) val -= log_likelihood(cov, k, om.omega[k]);
  if (hp.gamma > 0.0) {
    const PenaltySpec spec = PenaltySpec::make(hp.nu, om.K);
    for (Index i = 0; i < om.p; ++i)
      for (Index j = i + 1; j < om.p; ++j) {
        const double fv = f_value(spec, edge_at(om, i, j));
        if (std::isinf(hp.beta)) {
          val += hp.gamma * fv;
        } else {
          const double fa = f_value(spec, edge_at(anchor, i, j));
          const double ratio = (fa / hp.beta) / (1.0 + fa / hp.beta);
          val += mm_weight(hp.gamma, hp.beta, fa) * fv +
                 hp.gamma * hp.beta * (std::log1p(fa / hp.beta) - ratio);
        }
      }
  }
  return val;
}

// Membership in S_p(b): positive definite with operator norms within the caps
// (1e-9 absolute slack).
inline bool in_feasible_set(const Hyperparams& hp, const PrecisionSet& om) {
  for (int k = 0; k < om.K; ++k) {
    if (!is_positive_definite(om.omega[k])) return false;
    const double cap = hp.cap(k);
    if (std::isfinite(cap) && operator_norm(om.omega[k]) > cap + 1e-9)
      return false;
  }
  return true;
}

}  // namespace logshift
