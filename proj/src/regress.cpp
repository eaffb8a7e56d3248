#include "ridgeboost/regress.hpp"

#include <cmath>
#include <string>

#include "ridgeboost/error.hpp"

namespace ridgeboost {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, "ridge: lambda must be > 0");
  }
}

void require_rows(const Matrix& m, const Vector& z, const char* what) {
  if (m.rows() != z.size()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": " +
                                                  std::to_string(m.rows()) + " rows vs " +
                                                  std::to_string(z.size()) + " targets");
  }
  if (m.rows() == 0) throw Error(ErrorKind::EmptyData, std::string(what) + ": no rows");
  if (!m.allFinite() || !z.allFinite()) {
    throw Error(ErrorKind::InvalidParameter, std::string(what) + ": non-finite input");
  }
}

}  // namespace

Matrix second_moment(const Matrix& phi) {
  Matrix m = Matrix::Zero(phi.cols(), phi.cols());
  m.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose(),
                                               1.0 / static_cast<double>(phi.rows()));
  return m.selfadjointView<Eigen::Lower>();
}

std::shared_ptr<const SpdFactorization> factor_primal_system(const Matrix& phi, double lambda) {
  require_lambda(lambda);
  Matrix a = second_moment(phi);
  a.diagonal().array() += lambda;
  return std::make_shared<const SpdFactorization>(factor_spd(a));
}

std::shared_ptr<const SpdFactorization> factor_dual_system(const Matrix& k, double lambda) {
  require_lambda(lambda);
  Matrix a = k;
  a.diagonal().array() += static_cast<double>(k.rows()) * lambda;
  return std::make_shared<const SpdFactorization>(factor_spd(a));
}

RidgeFitPrimal fit_ridge_primal(const Matrix& phi, const Vector& z, double lambda,
                                std::shared_ptr<const SpdFactorization> factor) {
  require_lambda(lambda);
  require_rows(phi, z, "fit_ridge_primal");
  if (factor->size() != phi.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_ridge_primal: factorization size mismatch");
  }
  RidgeFitPrimal fit;
  fit.lambda = lambda;
  fit.n_train = phi.rows();
  const Vector rhs = phi.transpose() * z / static_cast<double>(phi.rows());
  fit.beta = factor->solve(rhs);
  fit.factor = std::move(factor);
  return fit;
}

RidgeFitPrimal fit_ridge_primal(const Matrix& phi, const Vector& z, double lambda) {
  require_rows(phi, z, "fit_ridge_primal");
  return fit_ridge_primal(phi, z, lambda, factor_primal_system(phi, lambda));
}

RidgeFitPrimal fit_ridge_primal(const FeatureMap& map, const Matrix& x, const Vector& z,
                                double lambda) {
  RidgeFitPrimal fit = fit_ridge_primal(map.apply(x), z, lambda);
  fit.map = map;
  return fit;
}

RidgeFitDual fit_ridge_dual(const Kernel& kernel, const Matrix& x, const Matrix& k,
                            const Vector& z, double lambda,
                            std::shared_ptr<const SpdFactorization> factor) {
  require_lambda(lambda);
  require_rows(k, z, "fit_ridge_dual");
  if (k.rows() != k.cols() || factor->size() != k.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_ridge_dual: Gram/factorization size mismatch");
  }
  RidgeFitDual fit;
  fit.lambda = lambda;
  fit.coeffs = factor->solve(z);
  fit.anchors = x;
  fit.kernel = kernel;
  fit.factor = std::move(factor);
  return fit;
}

RidgeFitDual fit_ridge_dual(const Matrix& k, const Vector& z, double lambda) {
  require_rows(k, z, "fit_ridge_dual");
  return fit_ridge_dual(Kernel{}, Matrix(), k, z, lambda, factor_dual_system(k, lambda));
}

RidgeFitDual fit_ridge_dual(const Kernel& kernel, const Matrix& x, const Vector& z, double lambda) {
  const Matrix k = gram(kernel, x);
  require_rows(k, z, "fit_ridge_dual");
  return fit_ridge_dual(kernel, x, k, z, lambda, factor_dual_system(k, lambda));
}

Vector predict_features(const RidgeFitPrimal& fit, const Matrix& phi_new) {
  if (phi_new.cols() != fit.beta.size()) {
    throw Error(ErrorKind::DimensionMismatch, "predict: feature dimension mismatch");
  }
  return phi_new * fit.beta;
}

Vector predict(const RidgeFitPrimal& fit, const Matrix& x_new) {
  if (!fit.map) return predict_features(fit, x_new);
  return predict_features(fit, fit.map->apply(x_new));
}

Vector predict_from_gram(const RidgeFitDual& fit, const Matrix& k_new_train) {
  if (k_new_train.cols() != fit.coeffs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "predict: cross-Gram column mismatch");
  }
  return k_new_train * fit.coeffs;
}

Vector predict(const RidgeFitDual& fit, const Matrix& x_new) {
  if (fit.anchors.rows() != fit.coeffs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "predict: dual fit has no anchors attached");
  }
  if (x_new.cols() != fit.anchors.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "predict: covariate dimension mismatch");
  }
  return predict_from_gram(fit, gram(fit.kernel, x_new, fit.anchors));
}

double ridge_objective(const Matrix& phi, const Vector& z, const Vector& beta, double lambda) {
  return (z - phi * beta).squaredNorm() / static_cast<double>(phi.rows()) +
         lambda * beta.squaredNorm();
}

}  // namespace ridgeboost
