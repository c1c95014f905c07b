// Block decomposition: screen edges through the subgradient test, find
// connected components, split the problem, and reassemble block solutions.
#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "logshift/objective.hpp"

namespace logshift {

// Symmetric boolean adjacency with a structurally false diagonal; only the
// strict upper triangle is stored.
class BoolSymMatrix {
 public:
  explicit BoolSymMatrix(Index p)
      : p_(p), tri_(static_cast<size_t>(p * (p - 1) / 2), 0) {
    if (p < 1) throw std::invalid_argument("BoolSymMatrix: dim must be >= 1");
  }

  Index dim() const { return p_; }

  bool operator()(Index i, Index j) const {
    if (i == j) return false;
    return tri_[offset(i, j)] != 0;
  }

  void set(Index i, Index j, bool v) {
    if (i == j) throw std::invalid_argument("BoolSymMatrix: diagonal is fixed false");
    tri_[offset(i, j)] = v ? 1 : 0;
  }

  Index count_true() const {
    Index c = 0;
    for (char v : tri_) c += v;
    return c;
  }

 private:
  size_t offset(Index i, Index j) const {
    const Index r = std::min(i, j), c = std::max(i, j);
    return static_cast<size_t>(r * (2 * p_ - r - 1) / 2 + (c - r - 1));
  }

  Index p_;
  std::vector<char> tri_;
};

// Disjoint blocks covering {0..p-1}; two indices share a block iff they are
// connected in the adjacency matrix.
struct ScreeningPartition {
  std::vector<std::vector<int>> blocks;
  BoolSymMatrix adjacency;
};

// C_ij = true iff the edge survives screening, i.e. the scaled covariance
// vector v_k = n_k S_ij^(k) / gamma falls outside the subdifferential of f
// at 0. gamma == 0 degenerates to a fully connected graph.
inline BoolSymMatrix build_adjacency(const CovarianceSet& cov,
                                     const Hyperparams& hp) {
  hp.validate(cov.K);
  BoolSymMatrix adj(cov.p);
  const PenaltySpec spec = PenaltySpec::make(hp.nu, cov.K);
  EdgeVector v(cov.K);
  for (Index i = 0; i < cov.p; ++i)
    for (Index j = i + 1; j < cov.p; ++j) {
      if (hp.gamma == 0.0) {
        adj.set(i, j, true);
        continue;
      }
      for (int k = 0; k < cov.K; ++k)
        v[k] = cov.n[k] * cov.S[k](i, j) / hp.gamma;
      adj.set(i, j, !in_subgradient_at_zero(spec, v));
    }
  return adj;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// Blocks carry internally ascending indices and are ordered by smallest
// member, so the output is deterministic.
inline ScreeningPartition connected_components(const BoolSymMatrix& adj) {
  const int p = static_cast<int>(adj.dim());
  UnionFind uf(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (adj(i, j)) uf.merge(i, j);

  std::vector<std::vector<int>> blocks;
  std::vector<int> root_to_block(p, -1);
  for (int i = 0; i < p; ++i) {
    const int r = uf.find(i);
    if (root_to_block[r] < 0) {
      root_to_block[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[root_to_block[r]].push_back(i);
  }
  return {std::move(blocks), adj};
}

inline SymMatrix restrict_to(const SymMatrix& m, const std::vector<int>& idx) {
  SymMatrix sub(static_cast<Index>(idx.size()));
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = a; b < idx.size(); ++b)
      sub.set(static_cast<Index>(a), static_cast<Index>(b),
              m(idx[a], idx[b]));
  return sub;
}

// Per-block covariance subproblems: rows/columns restricted to the block,
// sample sizes unchanged.
inline std::vector<CovarianceSet> split_problem(const CovarianceSet& cov,
                                                const ScreeningPartition& part) {
  std::vector<CovarianceSet> out;
  out.reserve(part.blocks.size());
  for (const auto& block : part.blocks) {
    std::vector<SymMatrix> sub;
    sub.reserve(cov.K);
    for (int k = 0; k < cov.K; ++k) sub.push_back(restrict_to(cov.S[k], block));
    out.push_back(CovarianceSet::make(std::move(sub), cov.n));
  }
  return out;
}

// Places block solutions on the diagonal; all cross-block entries are
// exactly zero.
inline PrecisionSet assemble(const ScreeningPartition& part,
                             const std::vector<PrecisionSet>& blocks) {
  if (blocks.size() != part.blocks.size())
    throw std::invalid_argument("assemble: block count mismatch");
  const Index p = part.adjacency.dim();
  const int K = blocks.empty() ? 0 : blocks.front().K;
  std::vector<SymMatrix> omega(K, SymMatrix(p));
  for (size_t m = 0; m < blocks.size(); ++m) {
    const auto& idx = part.blocks[m];
    if (blocks[m].p != static_cast<Index>(idx.size()) || blocks[m].K != K)
      throw std::invalid_argument("assemble: block dimension mismatch");
    for (int k = 0; k < K; ++k)
      for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = a; b < idx.size(); ++b)
          omega[k].set(idx[a], idx[b],
                       blocks[m].omega[k](static_cast<Index>(a),
                                          static_cast<Index>(b)));
  }
  return PrecisionSet::make(std::move(omega));
}

}  // namespace logshift
