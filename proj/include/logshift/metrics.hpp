// Fit evaluation: held-out negative log-likelihood, relative estimation
// error, edge counts and support recovery, validation-based selection.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "logshift/objective.hpp"
#include "logshift/screening.hpp"
#include "logshift/solver.hpp"

namespace logshift {

// sum_k (n_k/2)(<S^(k), Omega^(k)> - log det Omega^(k)), constants dropped.
inline double heldout_negloglik(const CovarianceSet& cov_holdout,
                                const PrecisionSet& om) {
  if (cov_holdout.K != om.K || cov_holdout.p != om.p)
    throw std::invalid_argument("heldout_negloglik: shape mismatch");
  double total = 0.0;
  for (int k = 0; k < om.K; ++k)
    total -= log_likelihood(cov_holdout, k, om.omega[k]);
  return total;
}

// sqrt(sum_k ||est - truth||_F^2) / sqrt(sum_k ||truth||_F^2).
inline double relative_error(const PrecisionSet& truth,
                             const PrecisionSet& est) {
  if (truth.K != est.K || truth.p != est.p)
    throw std::invalid_argument("relative_error: shape mismatch");
  double num = 0.0, den = 0.0;
  for (int k = 0; k < truth.K; ++k) {
    num += (est.omega[k].mat() - truth.omega[k].mat()).squaredNorm();
    den += truth.omega[k].mat().squaredNorm();
  }
  return std::sqrt(num) / std::sqrt(den);
}

struct EdgeStats {
  int edges = 0;
  std::vector<int> per_graph_edges;
  // populated only when a truth mask is supplied
  std::optional<int> tp, fp, fn;
};

// An edge (i,j), i<j, is selected iff any graph has an exactly nonzero
// estimate there.
inline EdgeStats edge_stats(const PrecisionSet& est,
                            const std::optional<BoolSymMatrix>& truth_mask = {}) {
  EdgeStats stats;
  stats.per_graph_edges.assign(est.K, 0);
  int tp = 0, fp = 0, fn = 0;
  if (truth_mask && truth_mask->dim() != est.p)
    throw std::invalid_argument("edge_stats: mask dimension mismatch");
  for (Index i = 0; i < est.p; ++i)
    for (Index j = i + 1; j < est.p; ++j) {
      bool selected = false;
      for (int k = 0; k < est.K; ++k)
        if (est.omega[k](i, j) != 0.0) {
          ++stats.per_graph_edges[k];
          selected = true;
        }
      if (selected) ++stats.edges;
      if (truth_mask) {
        const bool truth = (*truth_mask)(i, j);
        if (selected && truth) ++tp;
        if (selected && !truth) ++fp;
        if (!selected && truth) ++fn;
      }
    }
  if (truth_mask) {
    stats.tp = tp;
    stats.fp = fp;
    stats.fn = fn;
  }
  return stats;
}

// Index minimizing the held-out score; ties break to fewer edges, then to
// the smaller index. Candidates that are not positive definite are skipped.
inline int select_by_validation(
    const std::vector<std::pair<PrecisionSet, SolveReport>>& results,
    const CovarianceSet& cov_val) {
  if (results.empty())
    throw std::invalid_argument("select_by_validation: empty candidate list");
  int best = -1;
  double best_score = kInf;
  int best_edges = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    double score;
    try {
      score = heldout_negloglik(cov_val, results[i].first);
    } catch (const NotPositiveDefinite&) {
      continue;
    }
    const int edges = count_edges(results[i].first);
    if (best < 0 || score < best_score ||
        (score == best_score && edges < best_edges)) {
      best = static_cast<int>(i);
      best_score = score;
      best_edges = edges;
    }
  }
  if (best < 0)
    throw std::runtime_error("select_by_validation: no feasible candidate");
  return best;
}

}  // namespace logshift
