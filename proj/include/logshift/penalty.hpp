// The regularizer f = nu*l1 + (1-nu)*l2 on cross-graph edge vectors, the
// log-shift transform, their proximal operators, and the subgradient-at-zero
// membership test used by screening.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logshift/matrix.hpp"

namespace logshift {

// One edge's coefficients across the K graphs.
using EdgeVector = Vector;

struct PenaltySpec {
  double nu = 1.0;  // l1/l2 mix, in [0,1]
  int K = 1;
  double lipschitz = 1.0;  // Euclidean Lipschitz constant of f

  static PenaltySpec make(double nu, int K) {
    if (!(nu >= 0.0 && nu <= 1.0))
      throw std::invalid_argument("PenaltySpec: nu must be in [0,1]");
    if (K < 1) throw std::invalid_argument("PenaltySpec: K must be >= 1");
    return {nu, K, nu * std::sqrt(static_cast<double>(K)) + (1.0 - nu)};
  }
};

inline double f_value(const PenaltySpec& spec, const EdgeVector& v) {
  return spec.nu * v.lpNorm<1>() + (1.0 - spec.nu) * v.norm();
}

// beta * log(1 + fval/beta); beta == +inf gives the linear limit fval.
inline double logshift_value(double beta, double fval) {
  if (fval < 0.0) throw std::domain_error("logshift_value: fval < 0");
  if (std::isinf(beta)) return fval;
  return beta * std::log1p(fval / beta);
}

// Majorization weight gamma / (1 + f(anchor)/beta).
inline double mm_weight(double gamma, double beta, double fval_prev) {
  if (std::isinf(beta)) return gamma;
  return gamma / (1.0 + fval_prev / beta);
}

inline double soft_threshold(double x, double t) {
  return std::copysign(std::max(std::abs(x) - t, 0.0), x);
}

// argmin_x { 1/2 ||x - v||^2 + step * (nu ||x||_1 + (1-nu) ||x||_2) }.
// Coordinatewise soft-threshold by step*nu, then group soft-threshold.
inline EdgeVector prox_sparse_group(const PenaltySpec& spec,
                                    const EdgeVector& v, double step) {
  EdgeVector u = v.unaryExpr(
      [&](double x) { return soft_threshold(x, step * spec.nu); });
  const double group = step * (1.0 - spec.nu);
  if (group > 0.0) {
    const double norm = u.norm();
    if (norm <= group) return EdgeVector::Zero(v.size());
    u *= 1.0 - group / norm;
  }
  return u;
}

// Membership of -v in the subdifferential of f at 0 (f is sign-symmetric, so
// only |v_k| matters): sqrt(sum_k (|v_k| - nu)_+^2) <= 1 - nu.
inline bool in_subgradient_at_zero(const PenaltySpec& spec,
                                   const EdgeVector& v) {
  double ss = 0.0;
  for (Index k = 0; k < v.size(); ++k) {
    const double excess = std::max(std::abs(v[k]) - spec.nu, 0.0);
    ss += excess * excess;
  }
  return std::sqrt(ss) <= 1.0 - spec.nu;
}

// Global minimizer of 1/2 (y - x)^2 + gamma * beta * log(1 + |x|/beta).
// Candidates are 0 and the positive roots of
//   x^2 + (beta - |y|) x + (gamma*beta - beta*|y|) = 0,
// with the sign of y restored. Ties between 0 and a nonzero candidate
// resolve to 0.
inline double scalar_logshift_prox(double y, double gamma, double beta) {
  const double a = std::abs(y);
  if (a == 0.0 || gamma == 0.0) return y;
  if (std::isinf(beta)) return soft_threshold(y, gamma);

  const auto obj = [&](double x) {
    return 0.5 * (a - x) * (a - x) + gamma * beta * std::log1p(x / beta);
  };

  double best_x = 0.0;
  double best_obj = obj(0.0);
  const double b1 = beta - a;
  const double disc = b1 * b1 - 4.0 * (gamma * beta - beta * a);
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    for (double root : {(-b1 + sq) / 2.0, (-b1 - sq) / 2.0}) {
      if (root > 0.0 && obj(root) < best_obj) {
        best_obj = obj(root);
        best_x = root;
      }
    }
  }
  return std::copysign(best_x, y);
}

}  // namespace logshift
