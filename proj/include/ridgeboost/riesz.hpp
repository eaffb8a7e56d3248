#pragma once

#include <memory>
#include <optional>

#include "ridgeboost/features.hpp"
#include "ridgeboost/functionals.hpp"
#include "ridgeboost/linalg.hpp"

namespace ridgeboost {

/// Ridge Riesz regression in explicit features:
///   min_eta (1/n) eta^T Phi^T Phi eta - 2 theta(Phi)^T eta + lambda |eta|^2,
/// solved by eta = (M + lambda I)^{-1} theta(Phi).
struct RieszFitPrimal {
  Vector eta;
  double lambda = 0.0;
  std::optional<FeatureMap> map;
  std::shared_ptr<const SpdFactorization> factor;
};

/// Exact RKHS minimizer of the same loss, expanded over the augmented anchor set
/// (training rows followed by the functional's anchors).
struct RieszFitDual {
  Vector coeffs;  // n_train + m
  Matrix anchors;
  Eigen::Index n_train = 0;
  double lambda = 0.0;
  Kernel kernel;
  /// alpha(x_i) on the training rows, computed without cancellation.
  Vector train_values;
};

RieszFitPrimal fit_riesz_primal(const Matrix& phi_p, const Vector& theta_phi, double lambda);
RieszFitPrimal fit_riesz_primal(const Matrix& phi_p, const Vector& theta_phi, double lambda,
                                std::shared_ptr<const SpdFactorization> factor);

/// Closed form alpha = (1/lambda) [sum_s w_s k(., u_s) - sum_i a_i k(., x_i)],
/// a = (K + n lambda I)^{-1} K_{p,U} w, which satisfies the augmented normal
/// equations exactly. `factor` may be a shared factorization of K + n lambda I.
RieszFitDual fit_riesz_dual(const Kernel& kernel, const Matrix& x_p, const LinearFunctional& theta,
                            double lambda,
                            std::shared_ptr<const SpdFactorization> factor = nullptr,
                            const Matrix* k_pp = nullptr);

/// Solves ((1/n) K_{A,p} K_{p,A} + lambda K_{A,A} + jitter I) c = K_{A,U} w
/// directly by Cholesky with jitter escalation. Independent of fit_riesz_dual.
RieszFitDual fit_riesz_dual_augmented(const Kernel& kernel, const Matrix& x_p,
                                      const LinearFunctional& theta, double lambda);

/// Norm of the augmented-system gradient at fit.coeffs, and the norm of its
/// right-hand side K_{A,U} w for scaling.
struct StationarityCheck {
  double gradient_norm = 0.0;
  double rhs_norm = 0.0;
};
StationarityCheck riesz_dual_stationarity(const RieszFitDual& fit, const Matrix& x_p,
                                          const LinearFunctional& theta);

Vector implied_weights(const RieszFitPrimal& fit, const Matrix& x_p);
Vector implied_weights_features(const RieszFitPrimal& fit, const Matrix& phi_p);
Vector implied_weights(const RieszFitDual& fit, const Matrix& x_p);

double riesz_objective(const Matrix& phi_p, const Vector& theta_phi, const Vector& eta,
                       double lambda);

struct EquivalenceReport {
  double ridge_side = 0.0;  // theta(Phi)^T beta_ridge
  double riesz_side = 0.0;  // (1/n) alpha^T z
  double discrepancy = 0.0;
  double tolerance = 0.0;   // 1e-8 (1 + |theta_hat|)
  bool passed = false;
};

struct EquivalenceOptions {
  /// Test hook: added to every beta entry to force a mismatch (feature cases only).
  double perturb_beta = 0.0;
};

/// Recomputes both sides of the ridge/Riesz identity from scratch, each with
/// its own factorization.
EquivalenceReport equivalence_report(const Matrix& phi_p, const Vector& z, const Vector& theta_phi,
                                     double lambda, const EquivalenceOptions& opts = {});
double check_equivalence(const Matrix& phi_p, const Vector& z, const Vector& theta_phi,
                         double lambda);

/// Kernel form: ridge side w^T K_{U,p} (K + n lambda I)^{-1} z; Riesz side from
/// fit_riesz_dual with a separately computed factorization.
EquivalenceReport equivalence_report_dual(const Kernel& kernel, const Matrix& x_p, const Vector& z,
                                          const LinearFunctional& theta, double lambda);

}  // namespace ridgeboost
