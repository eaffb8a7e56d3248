#include "ridgeboost/functionals.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "ridgeboost/error.hpp"

namespace ridgeboost {

namespace {

void require_rows(const Matrix& x, const char* what) {
  if (x.rows() < 1) throw Error(ErrorKind::EmptyData, std::string(what) + ": no rows");
  if (!x.allFinite()) {
    throw Error(ErrorKind::InvalidParameter, std::string(what) + ": non-finite covariates");
  }
}

void require_coordinate(const Matrix& x, Eigen::Index j, const char* what) {
  if (j < 0 || j >= x.cols()) {
    throw Error(ErrorKind::InvalidParameter, std::string(what) + ": coordinate " +
                                                 std::to_string(j) + " out of range for " +
                                                 std::to_string(x.cols()) + " columns");
  }
}

std::vector<Eigen::Index> iota_units(Eigen::Index n) {
  std::vector<Eigen::Index> u(static_cast<std::size_t>(n));
  std::iota(u.begin(), u.end(), Eigen::Index{0});
  return u;
}

}  // namespace

LinearFunctional make_functional(Matrix anchors, Vector weights, std::string label) {
  if (anchors.rows() < 1) throw Error(ErrorKind::EmptyData, "functional: no anchors");
  if (anchors.rows() != weights.size()) {
    throw Error(ErrorKind::DimensionMismatch, "functional: anchors and weights differ in length");
  }
  if (!weights.allFinite()) throw Error(ErrorKind::InvalidParameter, "functional: non-finite weights");
  LinearFunctional f;
  f.n_units = anchors.rows();
  f.units = iota_units(f.n_units);
  f.anchors = std::move(anchors);
  f.weights = std::move(weights);
  f.label = std::move(label);
  return f;
}

LinearFunctional missing_mean_functional(const Matrix& x_target) {
  require_rows(x_target, "missing_mean_functional");
  const auto n = x_target.rows();
  return make_functional(x_target, Vector::Constant(n, 1.0 / static_cast<double>(n)),
                         "missing_mean");
}

LinearFunctional average_derivative_functional(const Matrix& x_eval, const DiffSpec& spec) {
  require_rows(x_eval, "average_derivative_functional");
  require_coordinate(x_eval, spec.coordinate, "average_derivative_functional");
  if (!(spec.step > 0.0) || !std::isfinite(spec.step)) {
    throw Error(ErrorKind::InvalidParameter, "average_derivative_functional: step must be > 0");
  }
  const auto n = x_eval.rows();
  const double w = 1.0 / (2.0 * spec.step * static_cast<double>(n));
  LinearFunctional f;
  f.anchors.resize(2 * n, x_eval.cols());
  f.weights.resize(2 * n);
  f.units.resize(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    f.anchors.row(2 * i) = x_eval.row(i);
    f.anchors(2 * i, spec.coordinate) += spec.step;
    f.anchors.row(2 * i + 1) = x_eval.row(i);
    f.anchors(2 * i + 1, spec.coordinate) -= spec.step;
    f.weights(2 * i) = w;
    f.weights(2 * i + 1) = -w;
    f.units[static_cast<std::size_t>(2 * i)] = i;
    f.units[static_cast<std::size_t>(2 * i + 1)] = i;
  }
  f.n_units = n;
  std::ostringstream label;
  label << "avg_derivative(j=" << spec.coordinate << ";h=" << spec.step << ")";
  f.label = label.str();
  return f;
}

LinearFunctional counterfactual_mean_functional(const Matrix& x, Eigen::Index coordinate,
                                                double value) {
  require_rows(x, "counterfactual_mean_functional");
  require_coordinate(x, coordinate, "counterfactual_mean_functional");
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidParameter, "counterfactual_mean_functional: non-finite value");
  }
  Matrix anchors = x;
  anchors.col(coordinate).setConstant(value);
  std::ostringstream label;
  label << "counterfactual(j=" << coordinate << ";a=" << value << ")";
  const auto n = x.rows();
  return make_functional(std::move(anchors), Vector::Constant(n, 1.0 / static_cast<double>(n)),
                         label.str());
}

double default_diff_step(const Matrix& x_eval, Eigen::Index coordinate, double factor) {
  require_coordinate(x_eval, coordinate, "default_diff_step");
  if (!(factor > 0.0)) throw Error(ErrorKind::InvalidParameter, "diff step factor must be > 0");
  if (x_eval.rows() < 2) return factor;
  const auto col = x_eval.col(coordinate).array();
  const double mean = col.mean();
  const double sd =
      std::sqrt((col - mean).square().sum() / static_cast<double>(x_eval.rows() - 1));
  return sd > 0.0 ? factor * sd : factor;
}

double eval_functional(const LinearFunctional& theta, const Vector& anchor_values) {
  if (anchor_values.size() != theta.weights.size()) {
    throw Error(ErrorKind::EvaluationFailure, "eval_functional: predictor returned " +
                                                  std::to_string(anchor_values.size()) +
                                                  " values for " +
                                                  std::to_string(theta.weights.size()) +
                                                  " anchors");
  }
  if (!anchor_values.allFinite()) {
    throw Error(ErrorKind::EvaluationFailure, "eval_functional: non-finite prediction");
  }
  return theta.weights.dot(anchor_values);
}

double eval_functional(const LinearFunctional& theta, const Predictor& f) {
  return eval_functional(theta, f(theta.anchors));
}

Vector unit_contributions(const LinearFunctional& theta, const Vector& anchor_values) {
  if (anchor_values.size() != theta.weights.size()) {
    throw Error(ErrorKind::EvaluationFailure, "unit_contributions: length mismatch");
  }
  Vector m = Vector::Zero(theta.n_units);
  const double scale = static_cast<double>(theta.n_units);
  for (Eigen::Index s = 0; s < theta.weights.size(); ++s) {
    m(theta.units[static_cast<std::size_t>(s)]) += scale * theta.weights(s) * anchor_values(s);
  }
  return m;
}

Vector functional_on_features(const LinearFunctional& theta, const FeatureMap& map) {
  if (theta.input_dim() != map.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "functional_on_features: anchors have " +
                                                  std::to_string(theta.input_dim()) +
                                                  " columns, map expects " +
                                                  std::to_string(map.input_dim()));
  }
  return map.apply(theta.anchors).transpose() * theta.weights;
}

}  // namespace ridgeboost
