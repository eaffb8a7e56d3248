#include "ridgeboost/audit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ridgeboost/error.hpp"
#include "ridgeboost/regress.hpp"

namespace ridgeboost {

namespace {

constexpr double kBoundSlack = 1e-10;

Contraction from_eigenvalues(std::vector<double> eig, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, "contraction_factor: lambda must be > 0");
  }
  Contraction c;
  const double smallest = eig.empty() ? 0.0 : std::max(0.0, eig.back());
  c.factor = lambda / (lambda + smallest);
  c.eigenvalues = std::move(eig);
  return c;
}

}  // namespace

double sample_mae(const Matrix& phi, const Vector& residuals) {
  if (phi.rows() != residuals.size()) {
    throw Error(ErrorKind::DimensionMismatch, "sample_mae: " + std::to_string(phi.rows()) +
                                                  " feature rows vs " +
                                                  std::to_string(residuals.size()) + " residuals");
  }
  if (phi.rows() == 0) throw Error(ErrorKind::EmptyData, "sample_mae: no rows");
  return (phi.transpose() * residuals).norm() / static_cast<double>(phi.rows());
}

double sample_mae_gram(const Matrix& k, const Vector& residuals) {
  if (k.rows() != residuals.size() || k.cols() != k.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "sample_mae_gram: Gram/residual size mismatch");
  }
  if (k.rows() == 0) throw Error(ErrorKind::EmptyData, "sample_mae_gram: no rows");
  const double quad = residuals.dot(k * residuals);
  return std::sqrt(std::max(0.0, quad)) / static_cast<double>(k.rows());
}

Contraction contraction(const Matrix& phi, double lambda) {
  if (phi.rows() == 0) throw Error(ErrorKind::EmptyData, "contraction_factor: no rows");
  return from_eigenvalues(sym_eigenvalues(second_moment(phi)), lambda);
}

double contraction_factor(const Matrix& phi, double lambda) {
  return contraction(phi, lambda).factor;
}

Contraction contraction_gram(const Matrix& k, double lambda) {
  if (k.rows() == 0) throw Error(ErrorKind::EmptyData, "contraction_factor: no rows");
  return from_eigenvalues(sym_eigenvalues(k / static_cast<double>(k.rows())), lambda);
}

double holdout_mae(const BoostModel& model, const Matrix& x_holdout, const Vector& y_holdout) {
  if (x_holdout.rows() == 0) throw Error(ErrorKind::EmptyData, "holdout_mae: empty holdout");
  if (x_holdout.rows() != y_holdout.size()) {
    throw Error(ErrorKind::DimensionMismatch, "holdout_mae: covariate/outcome length mismatch");
  }
  const Vector r = y_holdout - model.predict(x_holdout);
  if (model.is_primal()) {
    return sample_mae(std::get<FeatureMap>(model.basis()).apply(x_holdout), r);
  }
  return sample_mae_gram(gram(std::get<Kernel>(model.basis()), x_holdout), r);
}

MaeReport audit(const BoostModel& model) {
  MaeReport rep;
  rep.mae_init = model.mae_before();
  rep.mae_boosted = model.mae_after();
  const Contraction c = model.is_primal() ? contraction(model.design(), model.lambda())
                                          : contraction_gram(model.design(), model.lambda());
  rep.contraction_factor = c.factor;
  rep.eigenvalues = c.eigenvalues;
  rep.bound_holds = rep.mae_boosted <= rep.contraction_factor * rep.mae_init * (1.0 + kBoundSlack);
  return rep;
}

MaeReport audit(const BoostModel& model, const Matrix& x_holdout, const Vector& y_holdout) {
  MaeReport rep = audit(model);
  rep.holdout_mae = holdout_mae(model, x_holdout, y_holdout);
  return rep;
}

GradientIdentity gradient_identity(const Matrix& phi, const Vector& residuals, double lambda) {
  const RidgeFitPrimal fit = fit_ridge_primal(phi, residuals, lambda);
  const double n = static_cast<double>(phi.rows());
  GradientIdentity g;
  g.post_boost = phi.transpose() * (residuals - phi * fit.beta) / n;
  g.shrunk = lambda * fit.factor->solve(Vector(phi.transpose() * residuals / n));
  return g;
}

}  // namespace ridgeboost
