// Majorization-minimization outer loop, the convexity certificate, and the
// screened pipeline: screen -> per-block MM -> assemble.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logshift/admm.hpp"
#include "logshift/parallel.hpp"
#include "logshift/screening.hpp"

namespace logshift {

struct MmConfig {
  double tol = 1e-6;   // relative objective change
  int max_iter = 50;
  int threads = 1;     // worker bound for block solves
};

struct SolveReport {
  std::vector<double> objective_trace;  // nonincreasing
  int mm_iterations = 0;
  std::vector<int> admm_iterations;
  bool converged = false;
  bool convexity_certified = false;
  double beta_required = 0.0;
  std::vector<std::vector<int>> blocks;
  int edge_count = 0;
  double wall_time = 0.0;
  bool theta_substituted = false;  // a non-PD Z was evaluated through Theta
};

// Theorem-style certificate: beta_required = (gamma L^2 / 2) max_k b_k^2/n_k.
// Certified iff all caps are finite and beta >= beta_required; gamma == 0 has
// no penalty and is always certified.
inline std::pair<bool, double> certify_convexity(const CovarianceSet& cov,
                                                 const Hyperparams& hp,
                                                 const PenaltySpec& spec) {
  if (hp.gamma == 0.0) return {true, 0.0};
  if (!hp.all_caps_finite(cov.K)) return {false, kInf};
  double worst = 0.0;
  for (int k = 0; k < cov.K; ++k)
    worst = std::max(worst, hp.b[k] * hp.b[k] / cov.n[k]);
  const double required =
      0.5 * hp.gamma * spec.lipschitz * spec.lipschitz * worst;
  return {hp.beta >= required, required};
}

inline WeightMatrix mm_weights(const PrecisionSet& anchor,
                               const Hyperparams& hp,
                               const PenaltySpec& spec) {
  WeightMatrix w(anchor.p);
  for (Index i = 0; i < anchor.p; ++i)
    for (Index j = i + 1; j < anchor.p; ++j)
      w.set(i, j, mm_weight(hp.gamma, hp.beta,
                            f_value(spec, edge_at(anchor, i, j))));
  return w;
}

inline int count_edges(const PrecisionSet& om) {
  int edges = 0;
  for (Index i = 0; i < om.p; ++i)
    for (Index j = i + 1; j < om.p; ++j) {
      bool nonzero = false;
      for (int k = 0; k < om.K && !nonzero; ++k)
        nonzero = om.omega[k](i, j) != 0.0;
      if (nonzero) ++edges;
    }
  return edges;
}

namespace detail {

inline void check_inputs(const CovarianceSet& cov, const Hyperparams& hp,
                         const PenaltySpec& spec) {
  hp.validate(cov.K);
  if (spec.K != cov.K)
    throw std::invalid_argument("solver: PenaltySpec.K mismatch");
  if (spec.nu != hp.nu)
    throw std::invalid_argument("solver: PenaltySpec.nu disagrees with Hyperparams.nu");
}

}  // namespace detail

// MM outer loop: reweight, solve the weighted subproblem warm-started at the
// previous iterate, stop on relative objective change. The identity (not the
// zero matrix) is the default start, since F is undefined at 0; the first
// reweighting is unaffected because f vanishes on identity off-diagonals.
// A step that fails to decrease F is rejected and terminates the loop, so the
// reported trace is nonincreasing.
inline std::pair<PrecisionSet, SolveReport> mm_solve(
    const CovarianceSet& cov, const Hyperparams& hp, const PenaltySpec& spec,
    const AdmmConfig& cfg, const std::optional<PrecisionSet>& init = {},
    const MmConfig& mm = {}) {
  detail::check_inputs(cov, hp, spec);
  const auto t0 = std::chrono::steady_clock::now();

  AdmmConfig inner = cfg;
  inner.b = hp.b;

  PrecisionSet current = init ? *init : PrecisionSet::identity(cov.K, cov.p);
  double f_prev = objective_value(cov, hp, current);

  SolveReport report;
  report.objective_trace.push_back(f_prev);
  std::tie(report.convexity_certified, report.beta_required) =
      certify_convexity(cov, hp, spec);
  std::vector<int> all(static_cast<size_t>(cov.p));
  std::iota(all.begin(), all.end(), 0);
  report.blocks = {std::move(all)};

  // With beta = +inf the weights never change, so one subproblem solve is the
  // whole algorithm (the group graphical Lasso special case).
  const int max_outer = std::isinf(hp.beta) ? 1 : mm.max_iter;
  bool inner_all_converged = true;
  bool stopped_by_tol = std::isinf(hp.beta);

  for (int t = 0; t < max_outer; ++t) {
    const WeightMatrix w = mm_weights(current, hp, spec);
    AdmmResult res = solve_weighted_ggl(cov, w, spec, inner, current);
    report.admm_iterations.push_back(res.iterations);
    inner_all_converged = inner_all_converged && res.converged;

    double f_new;
    bool used_theta = false;
    try {
      f_new = objective_value(cov, hp, res.z);
    } catch (const NotPositiveDefinite&) {
      f_new = objective_value(cov, hp, res.theta);
      used_theta = true;
    }
    if (f_new > f_prev) break;  // reject non-descent steps

    current = std::move(res.z);
    report.theta_substituted = report.theta_substituted || used_theta;
    report.objective_trace.push_back(f_new);
    if (std::abs(f_new - f_prev) <= mm.tol * (1.0 + std::abs(f_prev))) {
      stopped_by_tol = true;
      f_prev = f_new;
      break;
    }
    f_prev = f_new;
  }

  report.mm_iterations =
      static_cast<int>(report.objective_trace.size()) - 1;
  report.converged = stopped_by_tol && inner_all_converged;
  report.edge_count = count_edges(current);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(current), std::move(report)};
}

namespace detail {

inline std::optional<PrecisionSet> restrict_init(
    const std::optional<PrecisionSet>& init, const std::vector<int>& block) {
  if (!init) return std::nullopt;
  std::vector<SymMatrix> sub;
  sub.reserve(init->K);
  for (int k = 0; k < init->K; ++k)
    sub.push_back(restrict_to(init->omega[k], block));
  return PrecisionSet::make(std::move(sub));
}

// Pads each block trace with its final value and sums elementwise; the sum
// equals F of the assembled iterates and stays nonincreasing.
inline std::vector<double> merge_traces(
    const std::vector<std::vector<double>>& traces) {
  size_t len = 0;
  for (const auto& t : traces) len = std::max(len, t.size());
  std::vector<double> merged(len, 0.0);
  for (const auto& t : traces)
    for (size_t i = 0; i < len; ++i)
      merged[i] += i < t.size() ? t[i] : t.back();
  return merged;
}

}  // namespace detail

// Full pipeline: adjacency, connected components, independent block solves,
// reassembly. Block subproblems run concurrently under mm.threads.
inline std::pair<PrecisionSet, SolveReport> fit(
    const CovarianceSet& cov, const Hyperparams& hp, const PenaltySpec& spec,
    const AdmmConfig& cfg, const std::optional<PrecisionSet>& init = {},
    const MmConfig& mm = {}) {
  detail::check_inputs(cov, hp, spec);
  const auto t0 = std::chrono::steady_clock::now();

  const ScreeningPartition part = connected_components(build_adjacency(cov, hp));
  const std::vector<CovarianceSet> subproblems = split_problem(cov, part);
  const int M = static_cast<int>(subproblems.size());

  std::vector<PrecisionSet> solutions(M, PrecisionSet::identity(cov.K, 1));
  std::vector<SolveReport> reports(M);
  MmConfig block_mm = mm;
  block_mm.threads = 1;
  parallel_for(M, mm.threads, [&](int m) {
    auto [sol, rep] = mm_solve(subproblems[m], hp, spec, cfg,
                               detail::restrict_init(init, part.blocks[m]),
                               block_mm);
    solutions[m] = std::move(sol);
    reports[m] = std::move(rep);
  });

  PrecisionSet omega = assemble(part, solutions);

  SolveReport report;
  std::vector<std::vector<double>> traces;
  traces.reserve(M);
  for (auto& r : reports) traces.push_back(std::move(r.objective_trace));
  report.objective_trace = detail::merge_traces(traces);
  report.mm_iterations = 0;
  report.converged = true;
  report.edge_count = 0;
  for (const auto& r : reports) {
    report.mm_iterations = std::max(report.mm_iterations, r.mm_iterations);
    report.converged = report.converged && r.converged;
    report.theta_substituted = report.theta_substituted || r.theta_substituted;
    report.edge_count += r.edge_count;
    report.admm_iterations.insert(report.admm_iterations.end(),
                                  r.admm_iterations.begin(),
                                  r.admm_iterations.end());
  }
  std::tie(report.convexity_certified, report.beta_required) =
      certify_convexity(cov, hp, spec);
  report.blocks = part.blocks;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(omega), std::move(report)};
}

struct PathEntry {
  std::optional<PrecisionSet> omega;  // empty on failure
  SolveReport report;
  std::string error;
};

// Solves the grid in decreasing-gamma order, warm-starting each point at the
// previous solution; results are returned in the input grid order. Failures
// are recorded per entry and the sweep continues.
inline std::vector<PathEntry> fit_path(const CovarianceSet& cov,
                                       const std::vector<Hyperparams>& grid,
                                       const PenaltySpec& spec,
                                       const AdmmConfig& cfg,
                                       const MmConfig& mm = {}) {
  if (grid.empty()) throw std::invalid_argument("fit_path: empty grid");
  std::vector<int> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return grid[a].gamma > grid[b].gamma;
  });

  std::vector<PathEntry> out(grid.size());
  std::optional<PrecisionSet> warm;
  for (int idx : order) {
    try {
      auto [sol, rep] = fit(cov, grid[idx], spec, cfg, warm, mm);
      bool pd = true;
      for (int k = 0; k < sol.K && pd; ++k)
        pd = is_positive_definite(sol.omega[k]);
      if (pd) warm = sol;  // a usable warm start for the next grid point
      out[idx] = {std::move(sol), std::move(rep), ""};
    } catch (const std::exception& ex) {
      out[idx].error = ex.what();
    }
  }
  return out;
}

}  // namespace logshift
