#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ridgeboost/features.hpp"
#include "ridgeboost/linalg.hpp"

namespace ridgeboost {

/// Anything that maps raw covariate rows to one prediction per row.
using Predictor = std::function<Vector(const Matrix&)>;

/// Empirical linear functional theta(f) = sum_s w_s f(u_s) over a finite anchor
/// set. Anchors are grouped into evaluation units (one per target row) so the
/// per-unit contributions m(f, x_j) can be recovered for variance estimates.
struct LinearFunctional {
  Matrix anchors;                   // m x d, raw covariate space
  Vector weights;                   // m
  std::vector<Eigen::Index> units;  // anchor -> evaluation unit
  Eigen::Index n_units = 0;
  std::string label;

  Eigen::Index num_anchors() const { return anchors.rows(); }
  Eigen::Index input_dim() const { return anchors.cols(); }
};

/// Finite difference coordinate and step for the average derivative.
struct DiffSpec {
  Eigen::Index coordinate = 0;
  double step = 0.0;
};

/// Each anchor is its own evaluation unit.
LinearFunctional make_functional(Matrix anchors, Vector weights, std::string label);

LinearFunctional missing_mean_functional(const Matrix& x_target);
LinearFunctional average_derivative_functional(const Matrix& x_eval, const DiffSpec& spec);
LinearFunctional counterfactual_mean_functional(const Matrix& x, Eigen::Index coordinate,
                                                double value);

/// Step factor * sample standard deviation of column j (falls back to factor
/// itself when the column is constant).
double default_diff_step(const Matrix& x_eval, Eigen::Index coordinate, double factor = 0.1);

double eval_functional(const LinearFunctional& theta, const Predictor& f);
/// theta applied to precomputed predictions at the anchors.
double eval_functional(const LinearFunctional& theta, const Vector& anchor_values);

/// Per-unit contributions m_j with mean(m_j) == theta(f).
Vector unit_contributions(const LinearFunctional& theta, const Vector& anchor_values);

/// sum_s w_s phi(u_s): theta applied coordinatewise to the feature functions.
Vector functional_on_features(const LinearFunctional& theta, const FeatureMap& map);

}  // namespace ridgeboost
