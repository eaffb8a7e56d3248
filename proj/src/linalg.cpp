#include "ridgeboost/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ridgeboost/error.hpp"

namespace ridgeboost {

namespace {

constexpr int kMaxJitterRetries = 6;
constexpr double kJitterCeiling = 1e-6;

void require_symmetric(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()));
  }
  if (!all_finite(a)) {
    throw Error(ErrorKind::InvalidParameter, std::string(what) + ": non-finite entries");
  }
  if (!is_symmetric(a)) {
    throw Error(ErrorKind::NotSymmetric, std::string(what) + ": input is not symmetric");
  }
}

}  // namespace

bool all_finite(const Matrix& a) { return a.allFinite(); }

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

SpdFactorization factor_spd(const Matrix& a, double jitter_floor) {
  require_symmetric(a, "factor_spd");
  if (!(jitter_floor >= 0.0) || !std::isfinite(jitter_floor)) {
    throw Error(ErrorKind::InvalidParameter, "factor_spd: jitter_floor must be >= 0");
  }
  const Eigen::Index n = a.rows();
  SpdFactorization out;
  if (n == 0) {
    out.llt_.compute(a);
    return out;
  }

  // Only the lower triangle is read by LLT; symmetrize so both halves agree.
  const Matrix sym = 0.5 * (a + a.transpose());
  const double trace = sym.trace();
  const double scale = trace > 0.0 ? trace / static_cast<double>(n) : 1.0;
  const double ceiling = std::max(jitter_floor, kJitterCeiling * scale);

  auto attempt = [&](double jitter) {
    Matrix shifted = sym;
    shifted.diagonal().array() += jitter;
    out.llt_.compute(shifted);
    if (out.llt_.info() != Eigen::Success) return false;
    // LLT only fails on non-positive pivots; a tiny positive pivot on a
    // singular input still yields an unusable factor.
    const auto diag = out.llt_.matrixLLT().diagonal();
    if (!diag.allFinite() || diag.minCoeff() <= 0.0) return false;
    out.jitter_ = jitter;
    return true;
  };

  if (attempt(jitter_floor)) return out;
  for (int retry = 0; retry < kMaxJitterRetries; ++retry) {
    const double jitter =
        std::max(jitter_floor, ceiling * std::pow(10.0, retry - (kMaxJitterRetries - 1)));
    if (attempt(jitter)) return out;
  }
  throw Error(ErrorKind::NotFactorizable,
              "factor_spd: matrix of size " + std::to_string(n) +
                  " not positive definite after jitter " + std::to_string(ceiling));
}

Matrix SpdFactorization::solve(const Matrix& rhs) const {
  if (rhs.rows() != size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "solve_spd: factor size " + std::to_string(size()) + " vs rhs rows " +
                    std::to_string(rhs.rows()));
  }
  if (size() == 0) return Matrix(0, rhs.cols());
  return llt_.solve(rhs);
}

Vector SpdFactorization::solve(const Vector& rhs) const {
  if (rhs.size() != size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "solve_spd: factor size " + std::to_string(size()) + " vs rhs length " +
                    std::to_string(rhs.size()));
  }
  if (size() == 0) return Vector(0);
  return llt_.solve(rhs);
}

Matrix SpdFactorization::reconstruct() const { return llt_.reconstructedMatrix(); }

Matrix solve_spd(const SpdFactorization& factor, const Matrix& rhs) { return factor.solve(rhs); }

Vector solve_spd(const SpdFactorization& factor, const Vector& rhs) { return factor.solve(rhs); }

std::vector<double> sym_eigenvalues(const Matrix& a) {
  require_symmetric(a, "sym_eigenvalues");
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.transpose()),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "sym_eigenvalues: QR iteration did not converge");
  }
  const Vector& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace ridgeboost
