#include "ridgeboost/boost.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ridgeboost/audit.hpp"
#include "ridgeboost/error.hpp"
#include "ridgeboost/riesz.hpp"

namespace ridgeboost {

namespace {

Vector evaluate(const Predictor& f, const Matrix& x, const char* what) {
  Vector out = f(x);
  if (out.size() != x.rows()) {
    throw Error(ErrorKind::EvaluationFailure, std::string(what) + ": predictor returned " +
                                                  std::to_string(out.size()) + " values for " +
                                                  std::to_string(x.rows()) + " rows");
  }
  if (!out.allFinite()) {
    throw Error(ErrorKind::EvaluationFailure, std::string(what) + ": non-finite prediction");
  }
  return out;
}

}  // namespace

double sample_variance(const Vector& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

const RidgeFitPrimal& BoostModel::primal_fit() const {
  if (!primal_) throw Error(ErrorKind::InvalidParameter, "BoostModel: not a primal model");
  return *primal_;
}

const RidgeFitDual& BoostModel::dual_fit() const {
  if (!dual_) throw Error(ErrorKind::InvalidParameter, "BoostModel: not a dual model");
  return *dual_;
}

const std::shared_ptr<const SpdFactorization>& BoostModel::factor() const {
  return primal_ ? primal_->factor : dual_->factor;
}

Vector BoostModel::predict_init(const Matrix& x) const { return evaluate(init_, x, "gamma_init"); }

Vector BoostModel::predict_boost(const Matrix& x) const {
  if (x.cols() != x_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "BoostModel::predict: covariate dimension mismatch");
  }
  return primal_ ? ridgeboost::predict(*primal_, x) : ridgeboost::predict(*dual_, x);
}

Vector BoostModel::predict(const Matrix& x) const { return predict_init(x) + predict_boost(x); }

Predictor BoostModel::as_predictor() const {
  auto self = std::make_shared<const BoostModel>(*this);
  return [self](const Matrix& x) { return self->predict(x); };
}

BoostModel fit_boost(const Matrix& x_p, const Vector& y_p, Predictor init, const BoostBasis& basis,
                     double lambda) {
  if (x_p.rows() == 0) throw Error(ErrorKind::EmptyData, "fit_boost: no training rows");
  if (x_p.rows() != y_p.size()) {
    throw Error(ErrorKind::DimensionMismatch, "fit_boost: covariate/outcome length mismatch");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, "fit_boost: lambda must be > 0");
  }
  if (!init) throw Error(ErrorKind::EvaluationFailure, "fit_boost: no initial predictor");

  BoostModel m;
  m.x_ = x_p;
  m.y_ = y_p;
  m.lambda_ = lambda;
  m.basis_ = basis;
  m.init_ = std::move(init);
  m.init_train_ = evaluate(m.init_, x_p, "gamma_init");
  m.init_residuals_ = y_p - m.init_train_;

  Vector boost_train;
  if (const auto* map = std::get_if<FeatureMap>(&basis)) {
    m.design_ = map->apply(x_p);
    auto fit = fit_ridge_primal(m.design_, m.init_residuals_, lambda,
                                factor_primal_system(m.design_, lambda));
    fit.map = *map;
    boost_train = m.design_ * fit.beta;
    m.primal_ = std::move(fit);
    m.mae_before_ = sample_mae(m.design_, m.init_residuals_);
  } else {
    const auto& kernel = std::get<Kernel>(basis);
    m.design_ = gram(kernel, x_p);
    m.dual_ = fit_ridge_dual(kernel, x_p, m.design_, m.init_residuals_, lambda,
                             factor_dual_system(m.design_, lambda));
    boost_train = m.design_ * m.dual_->coeffs;
    m.mae_before_ = sample_mae_gram(m.design_, m.init_residuals_);
  }
  m.boosted_residuals_ = m.init_residuals_ - boost_train;
  m.mae_after_ = m.is_primal() ? sample_mae(m.design_, m.boosted_residuals_)
                               : sample_mae_gram(m.design_, m.boosted_residuals_);
  return m;
}

Predictor zero_predictor() {
  return [](const Matrix& x) -> Vector { return Vector::Zero(x.rows()); };
}

Predictor make_predictor(RidgeFitDual fit) {
  auto held = std::make_shared<const RidgeFitDual>(std::move(fit));
  return [held](const Matrix& x) { return predict(*held, x); };
}

Predictor make_predictor(RidgeFitPrimal fit) {
  auto held = std::make_shared<const RidgeFitPrimal>(std::move(fit));
  return [held](const Matrix& x) { return predict(*held, x); };
}

namespace {

void fill_interval(PointEstimate& est) {
  est.ci_low = est.theta_hat - kNormalQuantile975 * est.std_error;
  est.ci_high = est.theta_hat + kNormalQuantile975 * est.std_error;
}

}  // namespace

PointEstimate plugin_estimate(const Predictor& f, const LinearFunctional& theta) {
  const Vector values = evaluate(f, theta.anchors, "plugin_estimate");
  const Vector m = unit_contributions(theta, values);
  PointEstimate est;
  est.label = theta.label;
  est.theta_hat = eval_functional(theta, values);
  est.theta_init = est.theta_hat;
  est.n_target = theta.n_units;
  est.std_error = std::sqrt(sample_variance(m) / static_cast<double>(theta.n_units));
  est.v_plugin = (m.array() - est.theta_hat).square().mean();
  est.mae_before = est.mae_after = std::numeric_limits<double>::quiet_NaN();
  est.equivalence_residual = std::numeric_limits<double>::quiet_NaN();
  fill_interval(est);
  return est;
}

PointEstimate estimate(const BoostModel& model, const LinearFunctional& theta,
                       const EstimateOptions& opts) {
  if (theta.input_dim() != model.x_train().cols()) {
    throw Error(ErrorKind::DimensionMismatch, "estimate: functional anchors have " +
                                                  std::to_string(theta.input_dim()) +
                                                  " columns, model expects " +
                                                  std::to_string(model.x_train().cols()));
  }
  const auto n = model.n_train();
  const Vector init_u = model.predict_init(theta.anchors);

  Vector boost_u;
  Vector alpha;
  if (model.is_primal()) {
    const auto& fit = model.primal_fit();
    const Vector theta_phi = functional_on_features(theta, *fit.map);
    boost_u = predict(fit, theta.anchors);
    alpha = implied_weights_features(fit_riesz_primal(model.design(), theta_phi, model.lambda(),
                                                      fit.factor),
                                     model.design());
  } else {
    const auto& fit = model.dual_fit();
    const Matrix k_up = gram(fit.kernel, theta.anchors, model.x_train());
    boost_u = predict_from_gram(fit, k_up);
    // alpha(X_p) = n (K + n lambda I)^{-1} K_{p,U} w, reusing the boost factorization.
    const Vector g_at_train = k_up.transpose() * theta.weights;
    alpha = static_cast<double>(n) * fit.factor->solve(g_at_train);
  }

  const Vector ma_u = init_u + boost_u;
  const Vector m = unit_contributions(theta, ma_u);

  PointEstimate est;
  est.label = theta.label;
  est.theta_hat = eval_functional(theta, ma_u);
  est.theta_init = eval_functional(theta, init_u);
  est.n_source = n;
  est.n_target = theta.n_units;

  const Vector& resid = opts.residuals == VarianceResiduals::Initial ? model.init_residuals()
                                                                     : model.boosted_residuals();
  const double s_q2 = sample_variance(m);
  const double s_p2 = sample_variance(alpha.cwiseProduct(resid));
  est.std_error = std::sqrt(s_q2 / static_cast<double>(theta.n_units) +
                            s_p2 / static_cast<double>(n));
  est.v_plugin = (m.array() - est.theta_hat).square().mean();
  est.mae_before = model.mae_before();
  est.mae_after = model.mae_after();
  fill_interval(est);

  if (opts.check_equivalence) {
    if (model.is_primal()) {
      const auto& map = *model.primal_fit().map;
      est.equivalence_residual = equivalence_report(model.design(), model.init_residuals(),
                                                    functional_on_features(theta, map),
                                                    model.lambda())
                                     .discrepancy;
    } else {
      est.equivalence_residual =
          equivalence_report_dual(model.dual_fit().kernel, model.x_train(),
                                  model.init_residuals(), theta, model.lambda())
              .discrepancy;
    }
  } else {
    est.equivalence_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return est;
}

std::vector<ProfileEntry> profile(const BoostModel& model,
                                  const std::vector<LinearFunctional>& family,
                                  const EstimateOptions& opts) {
  if (family.empty()) throw Error(ErrorKind::InvalidParameter, "profile: empty functional family");
  std::vector<ProfileEntry> out;
  out.reserve(family.size());
  for (const auto& theta : family) {
    ProfileEntry entry;
    try {
      entry.estimate = estimate(model, theta, opts);
      entry.status = "ok";
    } catch (const Error& e) {
      entry.estimate.label = theta.label;
      entry.estimate.theta_hat = std::numeric_limits<double>::quiet_NaN();
      entry.status = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace ridgeboost
