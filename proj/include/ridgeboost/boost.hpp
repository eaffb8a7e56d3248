#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ridgeboost/features.hpp"
#include "ridgeboost/functionals.hpp"
#include "ridgeboost/linalg.hpp"
#include "ridgeboost/regress.hpp"

namespace ridgeboost {

/// Function class for the boosting step: explicit features (primal) or a kernel (dual).
using BoostBasis = std::variant<FeatureMap, Kernel>;

/// gamma_ma(x) = gamma_init(x) + gamma_boost(x), with gamma_boost the ridge fit
/// of the residuals Y - gamma_init(X) on the source sample.
class BoostModel {
 public:
  const Matrix& x_train() const { return x_; }
  const Vector& y_train() const { return y_; }
  Eigen::Index n_train() const { return x_.rows(); }
  double lambda() const { return lambda_; }
  bool is_primal() const { return primal_.has_value(); }

  const RidgeFitPrimal& primal_fit() const;
  const RidgeFitDual& dual_fit() const;
  const BoostBasis& basis() const { return basis_; }

  /// Phi_p (primal) or K_pp (dual).
  const Matrix& design() const { return design_; }
  const std::shared_ptr<const SpdFactorization>& factor() const;

  const Predictor& init_predictor() const { return init_; }
  const Vector& init_train() const { return init_train_; }
  /// Y - gamma_init(X_p).
  const Vector& init_residuals() const { return init_residuals_; }
  /// Y - gamma_ma(X_p).
  const Vector& boosted_residuals() const { return boosted_residuals_; }

  double mae_before() const { return mae_before_; }
  double mae_after() const { return mae_after_; }

  Vector predict_init(const Matrix& x) const;
  Vector predict_boost(const Matrix& x) const;
  Vector predict(const Matrix& x) const;
  /// gamma_ma as a standalone predictor (shares this model's state).
  Predictor as_predictor() const;

 private:
  friend BoostModel fit_boost(const Matrix&, const Vector&, Predictor, const BoostBasis&, double);

  Matrix x_;
  Vector y_;
  double lambda_ = 0.0;
  BoostBasis basis_ = Kernel{};
  Predictor init_;
  std::optional<RidgeFitPrimal> primal_;
  std::optional<RidgeFitDual> dual_;
  Matrix design_;
  Vector init_train_;
  Vector init_residuals_;
  Vector boosted_residuals_;
  double mae_before_ = 0.0;
  double mae_after_ = 0.0;
};

BoostModel fit_boost(const Matrix& x_p, const Vector& y_p, Predictor init, const BoostBasis& basis,
                     double lambda);

Predictor zero_predictor();
Predictor make_predictor(RidgeFitDual fit);
Predictor make_predictor(RidgeFitPrimal fit);

inline constexpr double kNormalQuantile975 = 1.959964;

struct PointEstimate {
  std::string label;
  double theta_hat = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Eigen::Index n_source = 0;
  Eigen::Index n_target = 0;
  double mae_before = 0.0;
  double mae_after = 0.0;
  double equivalence_residual = 0.0;
  /// (1/n_q) sum_j (m(gamma_ma, x_j) - theta_hat)^2, the plug-in-only variance.
  double v_plugin = 0.0;
  /// theta(gamma_init), before the boosting correction.
  double theta_init = 0.0;
};

enum class VarianceResiduals { Initial, Boosted };

struct EstimateOptions {
  /// Residuals paired with the implied weights in the source-side variance term.
  VarianceResiduals residuals = VarianceResiduals::Initial;
  /// Recompute the ridge/Riesz identity from scratch (independent factorizations).
  bool check_equivalence = true;
};

/// Plug-in theta(gamma_ma) with SE^2 = S_q^2 / n_q + S_p^2 / n_p, where S_q^2 is
/// the sample variance of the per-unit contributions m(gamma_ma, x_j) and S_p^2
/// that of alpha(x_i) * residual_i over the source rows.
PointEstimate estimate(const BoostModel& model, const LinearFunctional& theta,
                       const EstimateOptions& opts = {});

/// Plug-in estimate for a bare predictor, SE from the per-unit term only.
PointEstimate plugin_estimate(const Predictor& f, const LinearFunctional& theta);

struct ProfileEntry {
  PointEstimate estimate;
  std::string status;  // "ok" or the error message
  bool ok() const { return status == "ok"; }
};

/// One estimate per functional from the same model; failures are reported per entry.
std::vector<ProfileEntry> profile(const BoostModel& model,
                                  const std::vector<LinearFunctional>& family,
                                  const EstimateOptions& opts = {});

double sample_variance(const Vector& v);

}  // namespace ridgeboost
