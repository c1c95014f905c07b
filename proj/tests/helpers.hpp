// Shared test utilities: random instance generators and the independent
// oracles (grid refinement, power iteration, BFS components, KKT residuals)
// that the module tests check against.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "logshift/datagen.hpp"
#include "logshift/objective.hpp"
#include "logshift/penalty.hpp"
#include "logshift/rng.hpp"
#include "logshift/screening.hpp"

namespace testutil {

using namespace logshift;

inline SymMatrix random_symmetric(Index p, Rng& rng, double scale = 1.0) {
  SymMatrix m(p);
  for (Index i = 0; i < p; ++i)
    for (Index j = i; j < p; ++j) m.set(i, j, scale * rng.normal());
  return m;
}

// A^T A + ridge * I, positive definite by construction.
inline SymMatrix random_pd(Index p, Rng& rng, double ridge = 1.0) {
  Matrix a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = rng.normal();
  return SymMatrix::from_lower(a.transpose() * a / static_cast<double>(p) +
                               ridge * Matrix::Identity(p, p));
}

inline Matrix random_orthogonal(Index p, Rng& rng) {
  Matrix a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

// Random PD matrix with eigenvalues in [lo, hi]; operator norm <= hi.
inline SymMatrix random_pd_capped(Index p, Rng& rng, double lo, double hi) {
  const Matrix q = random_orthogonal(p, rng);
  Vector ev(p);
  for (Index i = 0; i < p; ++i) ev[i] = rng.uniform(lo, hi);
  return SymMatrix::from_lower(q * ev.asDiagonal() * q.transpose());
}

// Sample covariances from tridiagonal truth graphs.
struct Instance {
  CovarianceSet cov;
  PrecisionSet truth;
};

inline Instance make_instance(int p, int K, int n, std::uint64_t seed) {
  SimConfig cfg;
  cfg.p = p;
  cfg.K = K;
  cfg.n.assign(K, n);
  cfg.seed = seed;
  auto truth = gen_tridiag_precisions(cfg);
  std::vector<SymMatrix> S;
  std::vector<double> sizes;
  for (int k = 0; k < K; ++k) {
    const Matrix x = sample_mvn(truth[k], n, splitmix64(seed) + k);
    const Matrix centered = x.rowwise() - x.colwise().mean();
    S.push_back(SymMatrix::from_lower(centered.transpose() * centered /
                                      static_cast<double>(n)));
    sizes.push_back(static_cast<double>(n));
  }
  return {CovarianceSet::make(std::move(S), std::move(sizes)),
          PrecisionSet::make(std::move(truth))};
}

inline bool nonincreasing(const std::vector<double>& trace,
                          double slack = 1e-9) {
  for (size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1] + slack) return false;
  return true;
}

// Largest |eigenvalue| by power iteration on m^2, run to stabilization.
inline double power_iteration_norm(const SymMatrix& m, Rng& rng) {
  const Index p = m.dim();
  Vector x(p);
  for (Index i = 0; i < p; ++i) x[i] = rng.normal();
  x.normalize();
  double prev = 0.0;
  for (int it = 0; it < 1000000; ++it) {
    Vector y = m.mat() * (m.mat() * x);
    const double lam2 = y.norm();
    if (lam2 == 0.0) return 0.0;
    x = y / lam2;
    const double est = std::sqrt(lam2);
    if (std::abs(est - prev) < 1e-13 * std::max(1.0, est) && it > 10)
      return est;
    prev = est;
  }
  return prev;
}

// Breadth-first-search connected components, ordered like the library's.
inline std::vector<std::vector<int>> bfs_components(const BoolSymMatrix& adj) {
  const int p = static_cast<int>(adj.dim());
  std::vector<bool> seen(p, false);
  std::vector<std::vector<int>> blocks;
  for (int s = 0; s < p; ++s) {
    if (seen[s]) continue;
    std::vector<int> block;
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      block.push_back(v);
      for (int w = 0; w < p; ++w)
        if (!seen[w] && adj(v, w)) {
          seen[w] = true;
          q.push(w);
        }
    }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

// Iteratively refined grid minimization over a box; returns the argmin.
inline Vector grid_minimize(const std::function<double(const Vector&)>& g,
                            Vector lo, Vector hi, int pts, int rounds) {
  const Index d = lo.size();
  Vector best = 0.5 * (lo + hi);
  double best_val = g(best);
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> counter(d, 0);
    Vector x(d);
    while (true) {
      for (Index i = 0; i < d; ++i) {
        const double t = pts == 1 ? 0.5
                                  : static_cast<double>(counter[i]) /
                                        static_cast<double>(pts - 1);
        x[i] = lo[i] + t * (hi[i] - lo[i]);
      }
      const double v = g(x);
      if (v < best_val) {
        best_val = v;
        best = x;
      }
      Index carry = 0;
      while (carry < d && ++counter[carry] == pts) counter[carry++] = 0;
      if (carry == d) break;
    }
    for (Index i = 0; i < d; ++i) {
      const double step = (hi[i] - lo[i]) / static_cast<double>(pts - 1);
      lo[i] = best[i] - step;
      hi[i] = best[i] + step;
    }
  }
  return best;
}

// Brute-force sparse-group prox: sign-reduced refined grid search.
inline EdgeVector prox_oracle(const PenaltySpec& spec, const EdgeVector& v,
                              double step) {
  const Index K = v.size();
  const auto obj = [&](const Vector& x) {
    return 0.5 * (x - v.cwiseAbs()).squaredNorm() +
           step * f_value(spec, x);
  };
  Vector lo = Vector::Zero(K);
  Vector hi = v.cwiseAbs();
  for (Index k = 0; k < K; ++k) hi[k] = std::max(hi[k], 1e-8);
  Vector best = grid_minimize(obj, lo, hi, 17, 9);
  EdgeVector out(K);
  for (Index k = 0; k < K; ++k) out[k] = std::copysign(best[k], v[k]);
  return out;
}

// Direct group-Lasso screening inequality: the edge survives iff
// sqrt(sum_k (n_k |S_ij^(k)| - gamma nu)_+^2) > gamma (1 - nu).
inline bool danaher_edge_survives(const Vector& s_ij, const Vector& n,
                                  double gamma, double nu) {
  double ss = 0.0;
  for (Index k = 0; k < s_ij.size(); ++k) {
    const double e = std::max(n[k] * std::abs(s_ij[k]) - gamma * nu, 0.0);
    ss += e * e;
  }
  return std::sqrt(ss) > gamma * (1.0 - nu);
}

// Max KKT violation of the single-graph l1 problem
//   (n/2)(<S,Omega> - log det Omega) + gamma sum_{i<j} |Omega_ij|.
inline double glasso_kkt_residual(const SymMatrix& S, double n, double gamma,
                                  const SymMatrix& Z) {
  Eigen::LLT<Matrix> llt(Z.mat());
  const Matrix Zinv =
      llt.solve(Matrix::Identity(Z.dim(), Z.dim()));
  double worst = 0.0;
  for (Index i = 0; i < Z.dim(); ++i)
    for (Index j = i; j < Z.dim(); ++j) {
      const double grad = n * (S(i, j) - Zinv(i, j));
      double viol;
      if (i == j)
        viol = std::abs(grad) / 2.0;
      else if (Z(i, j) != 0.0)
        viol = std::abs(grad + gamma * (Z(i, j) > 0 ? 1.0 : -1.0));
      else
        viol = std::max(std::abs(grad) - gamma, 0.0);
      worst = std::max(worst, viol);
    }
  return worst;
}

}  // namespace testutil
