#pragma once

#include <optional>
#include <vector>

#include "ridgeboost/boost.hpp"
#include "ridgeboost/linalg.hpp"

namespace ridgeboost {

/// Sample multiaccuracy error over the unit RKHS ball: the dual norm
/// (1/n) |Phi^T r|_2 (unsquared).
double sample_mae(const Matrix& phi, const Vector& residuals);
/// Same quantity from a Gram matrix: (1/n) sqrt(r^T K r).
double sample_mae_gram(const Matrix& k, const Vector& residuals);

struct Contraction {
  double factor = 1.0;
  /// Eigenvalues sigma_j^2 of (1/n) Phi^T Phi (or K / n), descending.
  std::vector<double> eigenvalues;
};

/// max_j lambda / (lambda + sigma_j^2) over the eigenvalues of (1/n) Phi^T Phi.
Contraction contraction(const Matrix& phi, double lambda);
double contraction_factor(const Matrix& phi, double lambda);
/// Kernel version using the eigenvalues of K / n, i.e. the factor restricted
/// to the span of the sample features.
Contraction contraction_gram(const Matrix& k, double lambda);

struct MaeReport {
  double mae_init = 0.0;
  double mae_boosted = 0.0;
  double contraction_factor = 1.0;
  std::vector<double> eigenvalues;
  std::optional<double> holdout_mae;
  /// mae_boosted <= contraction_factor * mae_init * (1 + 1e-10)
  bool bound_holds = false;
};

MaeReport audit(const BoostModel& model);
MaeReport audit(const BoostModel& model, const Matrix& x_holdout, const Vector& y_holdout);

/// Sample MAE of Y - gamma_ma(X) on a holdout set, features from the model's basis.
double holdout_mae(const BoostModel& model, const Matrix& x_holdout, const Vector& y_holdout);

/// Both sides of (1/n) Phi^T (r - Phi beta) = lambda (M + lambda I)^{-1} (1/n) Phi^T r.
struct GradientIdentity {
  Vector post_boost;
  Vector shrunk;
};
GradientIdentity gradient_identity(const Matrix& phi, const Vector& residuals, double lambda);

}  // namespace ridgeboost
