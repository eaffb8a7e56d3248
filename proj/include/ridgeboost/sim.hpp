#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridgeboost/boost.hpp"
#include "ridgeboost/linalg.hpp"

namespace ridgeboost::sim {

/// Regression function used to generate outcomes.
enum class Outcome {
  /// f(X) = X1 (0.2 + sin X1 + sigmoid(X2) - 0.2 X3)
  Nonlinear,
  /// f(X) = X1 + 0.5 X2 - 0.2 X3, for degenerate checks where f lies in a linear span.
  Linear,
};

/// X1, X2 ~ N(mu, 1); X3 = 4 sigmoid(X1 - X2) + eps - 2 with eps ~ N(0, 2^2);
/// Y = f(X) + eta with eta ~ N(0, noise_sd^2).
struct DgpConfig {
  double mu = 0.0;
  Eigen::Index n = 100;
  std::uint64_t seed = 0;
  double noise_sd = 2.0;
  Outcome outcome = Outcome::Nonlinear;
};

struct Dataset {
  Matrix x;
  std::optional<Vector> y;
  std::string provenance;  // "source" or "target"
};

double sigmoid(double t);
double regression_function(Outcome outcome, double x1, double x2, double x3);
Vector regression_function(Outcome outcome, const Matrix& x);
/// Partial derivative of f in x1 holding x2, x3 fixed.
double derivative_integrand(Outcome outcome, double x1, double x2, double x3);

/// Reproducible from cfg.seed; covariates are drawn before outcomes, so the
/// labeled and unlabeled draws for one seed share X.
Dataset draw_dataset(const DgpConfig& cfg, bool labeled);

struct OracleTruth {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t draws = 0;
};

/// Monte Carlo mean of the x1-derivative of f under the mu-shifted covariate law.
/// Requires n_oracle >= 1e6.
OracleTruth true_average_derivative(double mu, std::uint64_t n_oracle, std::uint64_t seed,
                                    Outcome outcome = Outcome::Nonlinear);

enum class InitKind { KernelRidge, Zero };
enum class BasisKind { RbfKernel, Rff, Linear, Polynomial };

/// Negative lambdas select the size-dependent defaults.
struct EstimatorSettings {
  InitKind init = InitKind::KernelRidge;
  /// Default n^{-1/2}.
  double init_lambda = -1.0;
  BasisKind basis = BasisKind::RbfKernel;
  /// Default n^{-3/2}, i.e. n^{-1/2} on the unnormalized squared-error scale.
  double boost_lambda = -1.0;
  Eigen::Index rff_features = 512;
  int polynomial_degree = 2;
  double polynomial_offset = 1.0;
  double bandwidth_factor = 1.0;
  bool standardize = true;
  Eigen::Index diff_coordinate = 0;
  double diff_step_factor = 0.1;
  VarianceResiduals residuals = VarianceResiduals::Initial;

  double resolved_init_lambda(Eigen::Index n) const;
  double resolved_boost_lambda(Eigen::Index n) const;
};

struct MonteCarloConfig {
  std::vector<Eigen::Index> n_grid{100, 300, 500};
  std::vector<double> mu_grid{-1.0, 0.0, 1.0};
  int replications = 500;
  std::uint64_t base_seed = 0;
  /// Target sample size per replication; 0 means n.
  Eigen::Index n_target = 0;
  std::uint64_t oracle_draws = 10'000'000;
  std::uint64_t oracle_seed = 271828;
  double noise_sd = 2.0;
  Outcome outcome = Outcome::Nonlinear;
  int threads = 1;
  EstimatorSettings estimator;
};

enum class Method { Naive, Boosted };
std::string to_string(Method m);

struct CoverageRow {
  Eigen::Index n = 0;
  double mu_target = 0.0;
  Method method = Method::Naive;
  double coverage = 0.0;
  double mean_ci_width = 0.0;
  double mean_bias = 0.0;
  int replications = 0;
};

/// One method's result on one (replication, n, mu) cell.
struct ReplicationRecord {
  Eigen::Index n = 0;
  double mu_target = 0.0;
  int replication = 0;
  Method method = Method::Naive;
  double theta_hat = 0.0;
  double std_error = 0.0;
  bool covered = false;
};

struct MonteCarloResult {
  std::vector<CoverageRow> rows;
  std::vector<ReplicationRecord> records;
  /// Truth per mu_grid entry.
  std::vector<OracleTruth> truths;
  /// Failed replications per n_grid entry.
  std::vector<int> failures;
  std::vector<std::string> failure_messages;
};

/// Seeds: source sample of replication r uses base_seed + r; the target sample
/// for the k-th mu uses base_seed + r + 2^31 + k * 2^40.
std::uint64_t source_seed(std::uint64_t base_seed, int replication);
std::uint64_t target_seed(std::uint64_t base_seed, int replication, std::size_t mu_index);

/// Fits both estimators on one replication and evaluates every target mu.
/// Returns records in (mu, naive/boosted) order.
std::vector<ReplicationRecord> run_replication(const MonteCarloConfig& cfg, Eigen::Index n,
                                               int replication,
                                               const std::vector<OracleTruth>& truths);

/// Replications run on cfg.threads workers; results are reduced in
/// replication order, so the output does not depend on the thread count.
MonteCarloResult run_monte_carlo(const MonteCarloConfig& cfg);

/// Rows for one (n, mu, method) cell, if present.
const CoverageRow* find_row(const std::vector<CoverageRow>& rows, Eigen::Index n, double mu,
                            Method method);

}  // namespace ridgeboost::sim
