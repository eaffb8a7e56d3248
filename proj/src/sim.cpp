#include "ridgeboost/sim.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "ridgeboost/error.hpp"
#include "ridgeboost/features.hpp"
#include "ridgeboost/functionals.hpp"
#include "ridgeboost/regress.hpp"

namespace ridgeboost::sim {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double regression_function(Outcome outcome, double x1, double x2, double x3) {
  if (outcome == Outcome::Linear) return x1 + 0.5 * x2 - 0.2 * x3;
  return x1 * (0.2 + std::sin(x1) + sigmoid(x2) - 0.2 * x3);
}

Vector regression_function(Outcome outcome, const Matrix& x) {
  if (x.cols() != 3) throw Error(ErrorKind::DimensionMismatch, "regression_function: need 3 columns");
  Vector f(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    f(i) = regression_function(outcome, x(i, 0), x(i, 1), x(i, 2));
  }
  return f;
}

double derivative_integrand(Outcome outcome, double x1, double x2, double x3) {
  if (outcome == Outcome::Linear) return 1.0;
  return 0.2 + std::sin(x1) + x1 * std::cos(x1) + sigmoid(x2) - 0.2 * x3;
}

Dataset draw_dataset(const DgpConfig& cfg, bool labeled) {
  if (cfg.n < 2) throw Error(ErrorKind::InvalidParameter, "draw_dataset: n must be >= 2");
  if (!std::isfinite(cfg.mu)) throw Error(ErrorKind::InvalidParameter, "draw_dataset: mu not finite");
  if (!(cfg.noise_sd >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "draw_dataset: noise_sd must be >= 0");
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const Eigen::Index n = cfg.n;
  Dataset d;
  d.provenance = labeled ? "source" : "target";
  d.x.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) d.x(i, 0) = cfg.mu + z(rng);
  for (Eigen::Index i = 0; i < n; ++i) d.x(i, 1) = cfg.mu + z(rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.x(i, 2) = 4.0 * sigmoid(d.x(i, 0) - d.x(i, 1)) + 2.0 * z(rng) - 2.0;
  }
  if (labeled) {
    Vector y = regression_function(cfg.outcome, d.x);
    for (Eigen::Index i = 0; i < n; ++i) y(i) += cfg.noise_sd * z(rng);
    d.y = std::move(y);
  }
  return d;
}

OracleTruth true_average_derivative(double mu, std::uint64_t n_oracle, std::uint64_t seed,
                                    Outcome outcome) {
  if (n_oracle < 1'000'000) {
    throw Error(ErrorKind::InvalidParameter, "true_average_derivative: need at least 1e6 draws");
  }
  if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidParameter, "true_average_derivative: bad mu");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  // Welford accumulation keeps 1e7-term sums accurate.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t k = 0; k < n_oracle; ++k) {
    const double x1 = mu + z(rng);
    const double x2 = mu + z(rng);
    const double x3 = 4.0 * sigmoid(x1 - x2) + 2.0 * z(rng) - 2.0;
    const double v = derivative_integrand(outcome, x1, x2, x3);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  OracleTruth t;
  t.value = mean;
  t.draws = n_oracle;
  t.std_error = std::sqrt(m2 / static_cast<double>(n_oracle - 1) / static_cast<double>(n_oracle));
  return t;
}

double EstimatorSettings::resolved_init_lambda(Eigen::Index n) const {
  return init_lambda > 0.0 ? init_lambda : std::pow(static_cast<double>(n), -0.5);
}

double EstimatorSettings::resolved_boost_lambda(Eigen::Index n) const {
  return boost_lambda > 0.0 ? boost_lambda : std::pow(static_cast<double>(n), -1.5);
}

std::string to_string(Method m) { return m == Method::Naive ? "naive" : "boosted"; }

std::uint64_t source_seed(std::uint64_t base_seed, int replication) {
  return base_seed + static_cast<std::uint64_t>(replication);
}

std::uint64_t target_seed(std::uint64_t base_seed, int replication, std::size_t mu_index) {
  return base_seed + static_cast<std::uint64_t>(replication) + (std::uint64_t{1} << 31) +
         (static_cast<std::uint64_t>(mu_index) << 40);
}

namespace {

BoostBasis make_basis(const EstimatorSettings& est, const Kernel& rbf, const Standardizer& scaling,
                      std::uint64_t seed) {
  switch (est.basis) {
    case BasisKind::RbfKernel:
      return rbf;
    case BasisKind::Rff:
      return sample_rff(rbf.bandwidth, 3, est.rff_features, seed).with_input_scaling(scaling);
    case BasisKind::Linear:
      return FeatureMap::identity(3).with_input_scaling(scaling);
    case BasisKind::Polynomial:
      return FeatureMap::polynomial_kernel(3, est.polynomial_degree, est.polynomial_offset).with_input_scaling(scaling);
  }
  return rbf;
}

}  // namespace

std::vector<ReplicationRecord> run_replication(const MonteCarloConfig& cfg, Eigen::Index n,
                                               int replication,
                                               const std::vector<OracleTruth>& truths) {
  const EstimatorSettings& est = cfg.estimator;
  DgpConfig src_cfg;
  src_cfg.mu = 0.0;
  src_cfg.n = n;
  src_cfg.seed = source_seed(cfg.base_seed, replication);
  src_cfg.noise_sd = cfg.noise_sd;
  src_cfg.outcome = cfg.outcome;
  const Dataset source = draw_dataset(src_cfg, true);

  const Standardizer scaling = est.standardize ? Standardizer::fit(source.x) : Standardizer{};
  const double bandwidth = est.bandwidth_factor * median_heuristic_bandwidth(scaling.apply(source.x));
  const Kernel rbf = Kernel::rbf(bandwidth).with_input_scaling(scaling);

  Predictor init = zero_predictor();
  if (est.init == InitKind::KernelRidge) {
    init = make_predictor(fit_ridge_dual(rbf, source.x, *source.y, est.resolved_init_lambda(n)));
  }
  const BoostModel model =
      fit_boost(source.x, *source.y, init, make_basis(est, rbf, scaling, src_cfg.seed),
                est.resolved_boost_lambda(n));

  EstimateOptions opts;
  opts.residuals = est.residuals;
  opts.check_equivalence = false;

  std::vector<ReplicationRecord> out;
  out.reserve(2 * cfg.mu_grid.size());
  for (std::size_t k = 0; k < cfg.mu_grid.size(); ++k) {
    DgpConfig tgt_cfg = src_cfg;
    tgt_cfg.mu = cfg.mu_grid[k];
    tgt_cfg.n = cfg.n_target > 0 ? cfg.n_target : n;
    tgt_cfg.seed = target_seed(cfg.base_seed, replication, k);
    const Dataset target = draw_dataset(tgt_cfg, false);
    DiffSpec spec;
    spec.coordinate = est.diff_coordinate;
    spec.step = default_diff_step(target.x, spec.coordinate, est.diff_step_factor);
    const LinearFunctional theta = average_derivative_functional(target.x, spec);

    const double truth = truths[k].value;
    const PointEstimate naive = plugin_estimate(init, theta);
    const PointEstimate boosted = estimate(model, theta, opts);
    for (const auto* pe : {&naive, &boosted}) {
      ReplicationRecord rec;
      rec.n = n;
      rec.mu_target = cfg.mu_grid[k];
      rec.replication = replication;
      rec.method = pe == &naive ? Method::Naive : Method::Boosted;
      rec.theta_hat = pe->theta_hat;
      rec.std_error = pe->std_error;
      rec.covered = pe->ci_low <= truth && truth <= pe->ci_high;
      out.push_back(rec);
    }
  }
  return out;
}

MonteCarloResult run_monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.replications < 1) throw Error(ErrorKind::InvalidParameter, "replications must be >= 1");
  if (cfg.n_grid.empty() || cfg.mu_grid.empty()) {
    throw Error(ErrorKind::InvalidParameter, "run_monte_carlo: empty grid");
  }
  for (auto n : cfg.n_grid) {
    if (n < 2) throw Error(ErrorKind::InvalidParameter, "run_monte_carlo: n must be >= 2");
  }

  MonteCarloResult result;
  for (double mu : cfg.mu_grid) {
    result.truths.push_back(true_average_derivative(mu, cfg.oracle_draws, cfg.oracle_seed, cfg.outcome));
  }

  struct Slot {
    std::vector<ReplicationRecord> records;
    std::string error;
    bool failed = false;
  };
  const std::size_t reps = static_cast<std::size_t>(cfg.replications);
  const std::size_t tasks = cfg.n_grid.size() * reps;
  std::vector<Slot> slots(tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
      const Eigen::Index n = cfg.n_grid[t / reps];
      const int r = static_cast<int>(t % reps);
      try {
        slots[t].records = run_replication(cfg, n, r, result.truths);
      } catch (const std::exception& e) {
        slots[t].failed = true;
        slots[t].error = e.what();
      }
    }
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  result.failures.assign(cfg.n_grid.size(), 0);
  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    const Eigen::Index n = cfg.n_grid[ni];
    std::vector<ReplicationRecord> cell;
    for (std::size_t r = 0; r < reps; ++r) {
      const Slot& s = slots[ni * reps + r];
      if (s.failed) {
        ++result.failures[ni];
        result.failure_messages.push_back("n=" + std::to_string(n) + " r=" + std::to_string(r) +
                                          ": " + s.error);
        continue;
      }
      cell.insert(cell.end(), s.records.begin(), s.records.end());
    }
    for (std::size_t k = 0; k < cfg.mu_grid.size(); ++k) {
      for (Method method : {Method::Naive, Method::Boosted}) {
        CoverageRow row;
        row.n = n;
        row.mu_target = cfg.mu_grid[k];
        row.method = method;
        double covered = 0.0, width = 0.0, bias = 0.0;
        for (const auto& rec : cell) {
          if (rec.method != method || rec.mu_target != cfg.mu_grid[k]) continue;
          ++row.replications;
          covered += rec.covered ? 1.0 : 0.0;
          width += 2.0 * kNormalQuantile975 * rec.std_error;
          bias += rec.theta_hat - result.truths[k].value;
        }
        if (row.replications > 0) {
          const double count = static_cast<double>(row.replications);
          row.coverage = covered / count;
          row.mean_ci_width = width / count;
          row.mean_bias = bias / count;
        }
        result.rows.push_back(row);
      }
    }
    result.records.insert(result.records.end(), cell.begin(), cell.end());
  }
  return result;
}

const CoverageRow* find_row(const std::vector<CoverageRow>& rows, Eigen::Index n, double mu,
                            Method method) {
  for (const auto& r : rows) {
    if (r.n == n && r.mu_target == mu && r.method == method) return &r;
  }
  return nullptr;
}

}  // namespace ridgeboost::sim
