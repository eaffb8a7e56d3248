#include "ridgeboost/riesz.hpp"

#include <cmath>
#include <string>

#include "ridgeboost/error.hpp"
#include "ridgeboost/regress.hpp"

namespace ridgeboost {

namespace {

constexpr double kEquivalenceTol = 1e-8;

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, "riesz: lambda must be > 0");
  }
}

EquivalenceReport make_report(double ridge_side, double riesz_side) {
  EquivalenceReport r;
  r.ridge_side = ridge_side;
  r.riesz_side = riesz_side;
  r.discrepancy = std::abs(ridge_side - riesz_side);
  r.tolerance = kEquivalenceTol * (1.0 + std::abs(ridge_side));
  r.passed = r.discrepancy <= r.tolerance;
  return r;
}

}  // namespace

RieszFitPrimal fit_riesz_primal(const Matrix& phi_p, const Vector& theta_phi, double lambda,
                                std::shared_ptr<const SpdFactorization> factor) {
  require_lambda(lambda);
  if (theta_phi.size() != phi_p.cols() || factor->size() != phi_p.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_riesz_primal: feature dimension mismatch");
  }
  RieszFitPrimal fit;
  fit.lambda = lambda;
  fit.eta = factor->solve(theta_phi);
  fit.factor = std::move(factor);
  return fit;
}

RieszFitPrimal fit_riesz_primal(const Matrix& phi_p, const Vector& theta_phi, double lambda) {
  if (phi_p.rows() == 0) throw Error(ErrorKind::EmptyData, "fit_riesz_primal: no rows");
  return fit_riesz_primal(phi_p, theta_phi, lambda, factor_primal_system(phi_p, lambda));
}

RieszFitDual fit_riesz_dual(const Kernel& kernel, const Matrix& x_p, const LinearFunctional& theta,
                            double lambda, std::shared_ptr<const SpdFactorization> factor,
                            const Matrix* k_pp) {
  require_lambda(lambda);
  if (x_p.rows() == 0) throw Error(ErrorKind::EmptyData, "fit_riesz_dual: no training rows");
  if (x_p.cols() != theta.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_riesz_dual: anchor/covariate dimension mismatch");
  }
  const auto n = x_p.rows();
  const auto m = theta.num_anchors();
  if (!factor) {
    factor = factor_dual_system(k_pp ? *k_pp : gram(kernel, x_p), lambda);
  }
  if (factor->size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "fit_riesz_dual: factorization size mismatch");
  }
  // g(x_i) where g = sum_s w_s k(., u_s) represents theta in the RKHS.
  const Vector g_at_train = gram(kernel, x_p, theta.anchors) * theta.weights;
  const Vector a = factor->solve(g_at_train);

  RieszFitDual fit;
  fit.lambda = lambda;
  fit.kernel = kernel;
  fit.n_train = n;
  fit.anchors.resize(n + m, x_p.cols());
  fit.anchors.topRows(n) = x_p;
  fit.anchors.bottomRows(m) = theta.anchors;
  fit.coeffs.resize(n + m);
  fit.coeffs.head(n) = -a / lambda;
  fit.coeffs.tail(m) = theta.weights / lambda;
  // alpha(X_p) = (1/lambda)(g - K a) = n a.
  fit.train_values = static_cast<double>(n) * a;
  return fit;
}

RieszFitDual fit_riesz_dual_augmented(const Kernel& kernel, const Matrix& x_p,
                                      const LinearFunctional& theta, double lambda) {
  require_lambda(lambda);
  if (x_p.rows() == 0) throw Error(ErrorKind::EmptyData, "fit_riesz_dual_augmented: no rows");
  if (x_p.cols() != theta.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_riesz_dual_augmented: dimension mismatch");
  }
  const auto n = x_p.rows();
  const auto m = theta.num_anchors();
  RieszFitDual fit;
  fit.lambda = lambda;
  fit.kernel = kernel;
  fit.n_train = n;
  fit.anchors.resize(n + m, x_p.cols());
  fit.anchors.topRows(n) = x_p;
  fit.anchors.bottomRows(m) = theta.anchors;

  const Matrix k_aa = gram(kernel, fit.anchors);
  const Matrix k_pa = k_aa.topRows(n);
  Matrix system = lambda * k_aa;
  system.selfadjointView<Eigen::Lower>().rankUpdate(k_pa.transpose(),
                                                    1.0 / static_cast<double>(n));
  system = system.selfadjointView<Eigen::Lower>();
  const Vector rhs = k_aa.rightCols(m) * theta.weights;
  fit.coeffs = factor_spd(system).solve(rhs);
  fit.train_values = k_pa * fit.coeffs;
  return fit;
}

StationarityCheck riesz_dual_stationarity(const RieszFitDual& fit, const Matrix& x_p,
                                          const LinearFunctional& theta) {
  const auto n = x_p.rows();
  const Matrix k_pa = gram(fit.kernel, x_p, fit.anchors);
  const Matrix k_aa = gram(fit.kernel, fit.anchors);
  const Matrix k_au = gram(fit.kernel, fit.anchors, theta.anchors);
  const Vector rhs = k_au * theta.weights;
  const Vector grad = k_pa.transpose() * (k_pa * fit.coeffs) / static_cast<double>(n) +
                      fit.lambda * (k_aa * fit.coeffs) - rhs;
  return {grad.norm(), rhs.norm()};
}

Vector implied_weights_features(const RieszFitPrimal& fit, const Matrix& phi_p) {
  if (phi_p.cols() != fit.eta.size()) {
    throw Error(ErrorKind::DimensionMismatch, "implied_weights: feature dimension mismatch");
  }
  return phi_p * fit.eta;
}

Vector implied_weights(const RieszFitPrimal& fit, const Matrix& x_p) {
  if (!fit.map) return implied_weights_features(fit, x_p);
  return implied_weights_features(fit, fit.map->apply(x_p));
}

Vector implied_weights(const RieszFitDual& fit, const Matrix& x_p) {
  if (x_p.cols() != fit.anchors.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "implied_weights: covariate dimension mismatch");
  }
  return gram(fit.kernel, x_p, fit.anchors) * fit.coeffs;
}

double riesz_objective(const Matrix& phi_p, const Vector& theta_phi, const Vector& eta,
                       double lambda) {
  return (phi_p * eta).squaredNorm() / static_cast<double>(phi_p.rows()) -
         2.0 * theta_phi.dot(eta) + lambda * eta.squaredNorm();
}

EquivalenceReport equivalence_report(const Matrix& phi_p, const Vector& z, const Vector& theta_phi,
                                     double lambda, const EquivalenceOptions& opts) {
  if (z.size() != phi_p.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "check_equivalence: z length mismatch");
  }
  const auto n = static_cast<double>(phi_p.rows());
  RidgeFitPrimal ridge = fit_ridge_primal(phi_p, z, lambda);
  ridge.beta.array() += opts.perturb_beta;
  const double ridge_side = theta_phi.dot(ridge.beta);

  const RieszFitPrimal riesz = fit_riesz_primal(phi_p, theta_phi, lambda);
  const double riesz_side = implied_weights_features(riesz, phi_p).dot(z) / n;
  return make_report(ridge_side, riesz_side);
}

double check_equivalence(const Matrix& phi_p, const Vector& z, const Vector& theta_phi,
                         double lambda) {
  return equivalence_report(phi_p, z, theta_phi, lambda).discrepancy;
}

EquivalenceReport equivalence_report_dual(const Kernel& kernel, const Matrix& x_p, const Vector& z,
                                          const LinearFunctional& theta, double lambda) {
  if (z.size() != x_p.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "check_equivalence: z length mismatch");
  }
  const Matrix k = gram(kernel, x_p);
  const RidgeFitDual ridge = fit_ridge_dual(kernel, x_p, k, z, lambda, factor_dual_system(k, lambda));
  const double ridge_side =
      theta.weights.dot(predict_from_gram(ridge, gram(kernel, theta.anchors, x_p)));

  const RieszFitDual riesz = fit_riesz_dual(kernel, x_p, theta, lambda, nullptr, &k);
  const double riesz_side = riesz.train_values.dot(z) / static_cast<double>(x_p.rows());
  return make_report(ridge_side, riesz_side);
}

}  // namespace ridgeboost
