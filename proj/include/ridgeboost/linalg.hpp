#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ridgeboost {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Cholesky factorization of A + jitter*I for a symmetric positive (semi)definite A.
class SpdFactorization {
 public:
  SpdFactorization() = default;

  Eigen::Index size() const { return llt_.rows(); }
  double jitter_used() const { return jitter_; }

  Matrix solve(const Matrix& rhs) const;
  Vector solve(const Vector& rhs) const;

  /// L * L^T, i.e. the matrix that was actually factored (A + jitter*I).
  Matrix reconstruct() const;

 private:
  friend SpdFactorization factor_spd(const Matrix& a, double jitter_floor);

  Eigen::LLT<Matrix> llt_;
  double jitter_ = 0.0;
};

/// Factor a symmetric matrix. If A is not numerically positive definite the
/// diagonal jitter escalates by 10x per retry (at most six retries) up to
/// 1e-6 * trace(A) / n; throws NotFactorizable past that.
SpdFactorization factor_spd(const Matrix& a, double jitter_floor = 0.0);

Matrix solve_spd(const SpdFactorization& factor, const Matrix& rhs);
Vector solve_spd(const SpdFactorization& factor, const Vector& rhs);

/// Eigenvalues of a symmetric matrix in descending order.
std::vector<double> sym_eigenvalues(const Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol = 1e-10);
bool all_finite(const Matrix& a);

}  // namespace ridgeboost
