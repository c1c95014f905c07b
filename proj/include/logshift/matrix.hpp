// Dense symmetric linear algebra: SymMatrix storage, eigendecomposition,
// Cholesky log-determinant, operator norm.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace logshift {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Cholesky pivot <= 0; doubles as the feasibility signal for log det.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : std::runtime_error(what) {}
};

// Symmetric p x p matrix. The lower triangle is authoritative: every
// constructor and mutator mirrors it, so entries(i,j) == entries(j,i) exactly.
class SymMatrix {
 public:
  explicit SymMatrix(Index p) : m_(Matrix::Zero(p, p)) {
    if (p < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
  }

  // Mirrors the lower triangle of a (the upper triangle of a is ignored).
  static SymMatrix from_lower(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
      throw std::invalid_argument("SymMatrix: square matrix required");
    SymMatrix m(a.rows());
    m.m_ = a.selfadjointView<Eigen::Lower>();
    return m;
  }

  static SymMatrix identity(Index p) {
    SymMatrix m(p);
    m.m_ = Matrix::Identity(p, p);
    return m;
  }

  static SymMatrix diagonal(const Vector& d) {
    SymMatrix m(d.size());
    m.m_ = d.asDiagonal();
    return m;
  }

  Index dim() const { return m_.rows(); }

  double operator()(Index i, Index j) const { return m_(i, j); }

  // Writes both (i,j) and (j,i).
  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const Matrix& mat() const { return m_; }

  bool all_finite() const { return m_.allFinite(); }

  double frobenius_norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

struct EigenSystem {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, m == vectors * values.asDiagonal() * vectors^T
};

inline void require_finite(const SymMatrix& m, const char* op) {
  if (!m.all_finite())
    throw std::domain_error(std::string(op) + ": non-finite entries");
}

inline EigenSystem sym_eigen(const SymMatrix& m) {
  require_finite(m, "sym_eigen");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_eigen: eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

// log det(m) for positive definite m; throws NotPositiveDefinite otherwise.
inline double chol_logdet(const SymMatrix& m) {
  require_finite(m, "chol_logdet");
  Eigen::LLT<Matrix> llt(m.mat());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("chol_logdet: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

inline bool is_positive_definite(const SymMatrix& m) {
  if (!m.all_finite()) return false;
  Eigen::LLT<Matrix> llt(m.mat());
  return llt.info() == Eigen::Success;
}

// max_i |lambda_i|, the spectral norm of a symmetric matrix.
inline double operator_norm(const SymMatrix& m) {
  EigenSystem es = sym_eigen(m);
  return es.values.cwiseAbs().maxCoeff();
}

}  // namespace logshift
