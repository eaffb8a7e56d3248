#pragma once

#include <memory>
#include <optional>

#include "ridgeboost/features.hpp"
#include "ridgeboost/linalg.hpp"

namespace ridgeboost {

// Every ridge fit here minimizes the normalized objective
//   J(h) = (1/n) sum_i (z_i - h(x_i))^2 + lambda |h|^2,
// so primal beta = (M + lambda I)^{-1} (1/n) Phi^T z with M = (1/n) Phi^T Phi and
// dual c = (K + n lambda I)^{-1} z describe the same function.

struct RidgeFitPrimal {
  Vector beta;
  double lambda = 0.0;
  Eigen::Index n_train = 0;
  std::optional<FeatureMap> map;
  /// Factorization of M + lambda I, shared with Riesz solves on the same design.
  std::shared_ptr<const SpdFactorization> factor;
};

struct RidgeFitDual {
  Vector coeffs;
  double lambda = 0.0;
  Matrix anchors;  // raw training rows
  Kernel kernel;
  /// Factorization of K + n lambda I.
  std::shared_ptr<const SpdFactorization> factor;
};

/// Normalized second-moment matrix (1/n) Phi^T Phi.
Matrix second_moment(const Matrix& phi);

/// Factor (1/n) Phi^T Phi + lambda I.
std::shared_ptr<const SpdFactorization> factor_primal_system(const Matrix& phi, double lambda);
/// Factor K + n lambda I.
std::shared_ptr<const SpdFactorization> factor_dual_system(const Matrix& k, double lambda);

RidgeFitPrimal fit_ridge_primal(const Matrix& phi, const Vector& z, double lambda);
RidgeFitPrimal fit_ridge_primal(const FeatureMap& map, const Matrix& x, const Vector& z,
                                double lambda);
/// Reuses an existing factorization of (1/n) Phi^T Phi + lambda I.
RidgeFitPrimal fit_ridge_primal(const Matrix& phi, const Vector& z, double lambda,
                                std::shared_ptr<const SpdFactorization> factor);

/// Dual fit from a precomputed Gram matrix; the result has no anchors/kernel
/// attached and can only predict through predict_from_gram.
RidgeFitDual fit_ridge_dual(const Matrix& k, const Vector& z, double lambda);
RidgeFitDual fit_ridge_dual(const Kernel& kernel, const Matrix& x, const Vector& z, double lambda);
RidgeFitDual fit_ridge_dual(const Kernel& kernel, const Matrix& x, const Matrix& k,
                            const Vector& z, double lambda,
                            std::shared_ptr<const SpdFactorization> factor);

Vector predict(const RidgeFitPrimal& fit, const Matrix& x_new);
Vector predict_features(const RidgeFitPrimal& fit, const Matrix& phi_new);
Vector predict(const RidgeFitDual& fit, const Matrix& x_new);
/// sum_i c_i k(x, x_i) given the cross Gram K(x_new, train).
Vector predict_from_gram(const RidgeFitDual& fit, const Matrix& k_new_train);

/// (1/n) |z - Phi beta|^2 + lambda |beta|^2.
double ridge_objective(const Matrix& phi, const Vector& z, const Vector& beta, double lambda);

}  // namespace ridgeboost
