#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ridgeboost/boost.hpp"
#include "ridgeboost/config.hpp"
#include "ridgeboost/csv.hpp"
#include "ridgeboost/riesz.hpp"
#include "ridgeboost/sim.hpp"

namespace ridgeboost::cli {

/// Parses arguments, dispatches to a subcommand and maps errors to exit codes
/// (0 ok, 1 equivalence mismatch, 2 config, 3 data, 4 numerical).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_estimate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_profile(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_audit(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_check_equivalence(const RunConfig& cfg, const std::filesystem::path& out_dir,
                          std::ostream& log);

sim::MonteCarloConfig monte_carlo_config(const RunConfig& cfg);
std::string coverage_csv(const sim::MonteCarloResult& result);
std::string estimates_csv(const std::vector<ProfileEntry>& entries);

/// Source data, model and the evaluation covariates, as resolved from a config.
struct Pipeline {
  LabeledData source;
  Matrix x_eval;  // target covariates (source covariates when no target file)
  BoostModel model;
  double bandwidth = 0.0;
  double init_lambda = 0.0;
  double lambda = 0.0;
  std::vector<std::string> notes;  // resolved values for resolved.cfg
};

Pipeline build_pipeline(const RunConfig& cfg);

/// Functional specs separated by ';':
///   missing_mean
///   avg_derivative(j=<column>, h=<step>)      h defaults to diff_step_factor * sd
///   counterfactual(j=<column>, a=<v | lo..hi | lo..hi:step>)
/// Columns are names or zero-based indices.
std::vector<LinearFunctional> parse_functionals(const std::string& spec, const Matrix& x_eval,
                                                const std::vector<std::string>& columns,
                                                double diff_step_factor);

enum class FunctionalType { MissingMean, AverageDerivative, Counterfactual };
std::string to_string(FunctionalType t);

struct EquivalenceCase {
  FunctionalType type = FunctionalType::MissingMean;
  std::string basis;
  Eigen::Index n = 0;
  Eigen::Index dim = 0;  // D, or n for kernel cases
  double lambda = 0.0;
  EquivalenceReport report;
};

struct EquivalenceSuite {
  std::vector<EquivalenceCase> cases;
  double max_discrepancy = 0.0;
  /// max discrepancy / tolerance
  double max_ratio = 0.0;
  int failures = 0;
  bool passed() const { return failures == 0 && !cases.empty(); }
};

/// Random ridge/Riesz identity checks cycling through the given functional
/// types and lambda in {1e-3, 1e-1, 1, 10}; n <= 80, D <= 12.
EquivalenceSuite run_equivalence_suite(int instances, std::uint64_t seed, double perturb_beta = 0.0,
                                       const std::vector<FunctionalType>& types = {
                                           FunctionalType::MissingMean,
                                           FunctionalType::AverageDerivative,
                                           FunctionalType::Counterfactual});

}  // namespace ridgeboost::cli
