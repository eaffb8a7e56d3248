#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridgeboost/linalg.hpp"

namespace ridgeboost {

/// Affine per-column rescaling x -> (x - center) / scale, applied before a
/// feature map or kernel sees its input. An empty standardizer is the identity.
struct Standardizer {
  Vector center;
  Vector scale;

  /// Column means and sample standard deviations; constant columns keep scale 1.
  static Standardizer fit(const Matrix& x);

  bool is_identity() const { return center.size() == 0; }
  Matrix apply(const Matrix& x) const;
};

enum class FeatureKind { Identity, Polynomial, Rff };

/// Deterministic map from raw covariates to a D-dimensional feature vector.
class FeatureMap {
 public:
  static FeatureMap identity(Eigen::Index input_dim);
  /// Plain monomials x^a with 1 <= |a| <= degree (plus the constant when
  /// include_bias), graded order.
  static FeatureMap polynomial(Eigen::Index input_dim, int degree, bool include_bias = true);
  /// Monomials scaled by sqrt(multinomial * offset^(degree-|a|)) so that
  /// phi(x).phi(y) == (x.y + offset)^degree exactly.
  static FeatureMap polynomial_kernel(Eigen::Index input_dim, int degree, double offset);

  FeatureKind kind() const { return kind_; }
  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index output_dim() const;
  int degree() const { return degree_; }
  double bandwidth() const { return bandwidth_; }
  std::uint64_t seed() const { return seed_; }

  const Standardizer& input_scaling() const { return scaling_; }
  FeatureMap with_input_scaling(Standardizer scaling) const;

  /// Row i of the result is phi(x_i).
  Matrix apply(const Matrix& x) const;

  std::string describe() const;

 private:
  friend FeatureMap sample_rff(double bandwidth, Eigen::Index input_dim, Eigen::Index num_features,
                               std::uint64_t seed);

  FeatureKind kind_ = FeatureKind::Identity;
  Eigen::Index input_dim_ = 0;
  int degree_ = 0;
  bool include_bias_ = true;
  double offset_ = 0.0;
  bool scaled_ = false;
  // Polynomial: exponents (terms x input_dim) and per-term coefficients.
  std::vector<std::vector<int>> exponents_;
  std::vector<double> coefficients_;
  // Random Fourier features.
  double bandwidth_ = 0.0;
  std::uint64_t seed_ = 0;
  Matrix frequencies_;  // D x input_dim
  Vector phases_;       // D
  Standardizer scaling_;
};

/// Random Fourier features for the RBF kernel exp(-|x-y|^2 / (2 bandwidth^2)):
/// x -> sqrt(2/D) cos(w.x + b), w ~ N(0, I / bandwidth^2), b ~ U[0, 2pi).
FeatureMap sample_rff(double bandwidth, Eigen::Index input_dim, Eigen::Index num_features,
                      std::uint64_t seed);

enum class KernelKind { Linear, Polynomial, Rbf };

struct Kernel {
  KernelKind kind = KernelKind::Rbf;
  int degree = 2;
  double offset = 1.0;
  double bandwidth = 1.0;
  Standardizer scaling;

  static Kernel linear();
  static Kernel polynomial(int degree, double offset);
  static Kernel rbf(double bandwidth);

  Kernel with_input_scaling(Standardizer s) const;

  /// k(x, y) on already-scaled inputs.
  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    const Eigen::Ref<const Eigen::RowVectorXd>& y) const;

  std::string describe() const;
};

/// Entry (i, j) = k(a_i, b_j).
Matrix gram(const Kernel& kernel, const Matrix& a, const Matrix& b);
/// Symmetric Gram of a with itself.
Matrix gram(const Kernel& kernel, const Matrix& a);

/// Median pairwise Euclidean distance over at most 500 rows (fixed subsample seed 0).
double median_heuristic_bandwidth(const Matrix& x);

/// Explicit finite map whose inner products reproduce `kernel`, when one exists
/// (linear -> identity, polynomial -> scaled monomials). Empty for rbf.
std::optional<FeatureMap> exact_feature_map(const Kernel& kernel, Eigen::Index input_dim);

}  // namespace ridgeboost
