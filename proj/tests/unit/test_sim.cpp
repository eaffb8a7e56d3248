#include <doctest.h>

#include <cmath>

#include "ridgeboost/error.hpp"
#include "ridgeboost/sim.hpp"

using namespace ridgeboost;
using namespace ridgeboost::sim;

namespace {

// Average derivative under the mu-shifted covariate law by one-dimensional
// quadrature (scipy.integrate.quad on 0.2 + mu cos(mu) e^{-1/2} + E[sigmoid(N(mu, 1))]).
constexpr double kTruthMuMinus1 = 0.17555541583385692;
constexpr double kTruthMu0 = 0.7;
constexpr double kTruthMuPlus1 = 1.2244445841661433;

MonteCarloConfig small_config() {
  MonteCarloConfig cfg;
  cfg.n_grid = {60, 90};
  cfg.mu_grid = {-1.0, 0.0, 1.0};
  cfg.replications = 6;
  cfg.oracle_draws = 1'000'000;
  return cfg;
}

}  // namespace

TEST_CASE("covariate moments") {
  for (double mu : {-1.0, 0.0, 1.0}) {
    DgpConfig cfg;
    cfg.mu = mu;
    cfg.n = 1'000'000;
    cfg.seed = 42;
    const auto d = draw_dataset(cfg, false);
    CHECK(std::abs(d.x.col(2).mean()) <= 0.01);
    CHECK(std::abs(d.x.col(0).mean() - mu) <= 0.01);
    CHECK_FALSE(d.y.has_value());
    CHECK(d.provenance == "target");
  }
}

TEST_CASE("datasets are reproducible from the seed") {
  DgpConfig cfg;
  cfg.n = 50;
  cfg.seed = 9;
  const auto a = draw_dataset(cfg, true);
  const auto b = draw_dataset(cfg, true);
  CHECK(a.x == b.x);
  CHECK(*a.y == *b.y);
  CHECK(draw_dataset(cfg, false).x == a.x);
  cfg.seed = 10;
  CHECK(draw_dataset(cfg, true).x != a.x);
  cfg.n = 1;
  CHECK_THROWS_AS(draw_dataset(cfg, true), Error);
}

TEST_CASE("outcome noise has the configured spread") {
  DgpConfig cfg;
  cfg.n = 200'000;
  cfg.seed = 3;
  const auto d = draw_dataset(cfg, true);
  const Vector noise = *d.y - regression_function(Outcome::Nonlinear, d.x);
  CHECK(noise.mean() == doctest::Approx(0.0).epsilon(0.02));
  CHECK(std::sqrt(noise.squaredNorm() / static_cast<double>(cfg.n)) == doctest::Approx(2.0).epsilon(0.01));
  cfg.noise_sd = 0.0;
  const auto clean = draw_dataset(cfg, true);
  CHECK((*clean.y - regression_function(Outcome::Nonlinear, clean.x)).norm() == 0.0);
}

TEST_CASE("integrand hand value and finite-difference check") {
  CHECK(derivative_integrand(Outcome::Nonlinear, 0, 0, 0) == doctest::Approx(0.7));
  CHECK(sigmoid(0.0) == 0.5);
  const double h = 1e-6;
  for (double x1 : {-1.3, 0.2, 2.0}) {
    const double fd = (regression_function(Outcome::Nonlinear, x1 + h, 0.4, -0.7) -
                       regression_function(Outcome::Nonlinear, x1 - h, 0.4, -0.7)) /
                      (2 * h);
    CHECK(derivative_integrand(Outcome::Nonlinear, x1, 0.4, -0.7) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("oracle matches quadrature values") {
  const double truths[] = {kTruthMuMinus1, kTruthMu0, kTruthMuPlus1};
  const double mus[] = {-1.0, 0.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    const auto t = true_average_derivative(mus[k], 10'000'000, 271828);
    MESSAGE("mu=" << mus[k] << " oracle=" << t.value << " se=" << t.std_error);
    CHECK(t.std_error <= 1e-3);
    CHECK(std::abs(t.value - truths[k]) <= 4.0 * t.std_error);
  }
  CHECK_THROWS_AS(true_average_derivative(0.0, 999'999, 1), Error);
}

TEST_CASE("oracle with disjoint seeds agrees with itself") {
  const auto a = true_average_derivative(0.5, 2'000'000, 1);
  const auto b = true_average_derivative(0.5, 2'000'000, 2);
  CHECK(a.value != b.value);
  CHECK(std::abs(a.value - b.value) <= 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("seed scheme") {
  CHECK(source_seed(10, 3) == 13);
  CHECK(target_seed(10, 3, 0) == 13 + (std::uint64_t{1} << 31));
  CHECK(target_seed(10, 3, 2) == 13 + (std::uint64_t{1} << 31) + (std::uint64_t{2} << 40));
}

TEST_CASE("grid cardinality and a single replication") {
  MonteCarloConfig cfg;
  cfg.replications = 1;
  cfg.oracle_draws = 1'000'000;
  const auto res = run_monte_carlo(cfg);
  CHECK(res.rows.size() == 18);
  for (const auto& row : res.rows) {
    CHECK(row.replications == 1);
    CHECK((row.coverage == 0.0 || row.coverage == 1.0));
  }

  MonteCarloConfig minimal;
  minimal.n_grid = {50};
  minimal.mu_grid = {0.0};
  minimal.replications = 1;
  minimal.oracle_draws = 1'000'000;
  const auto one = run_monte_carlo(minimal);
  REQUIRE(one.rows.size() == 2);
  CHECK(one.rows[0].method == Method::Naive);
  CHECK(one.rows[1].method == Method::Boosted);
  CHECK(find_row(one.rows, 50, 0.0, Method::Boosted) == &one.rows[1]);
  CHECK(find_row(one.rows, 51, 0.0, Method::Boosted) == nullptr);
}

TEST_CASE("results do not depend on the number of threads") {
  auto cfg = small_config();
  const auto serial = run_monte_carlo(cfg);
  cfg.threads = 3;
  const auto parallel = run_monte_carlo(cfg);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].coverage == parallel.rows[i].coverage);
    CHECK(serial.rows[i].mean_ci_width == parallel.rows[i].mean_ci_width);
    CHECK(serial.rows[i].mean_bias == parallel.rows[i].mean_bias);
  }
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].theta_hat == parallel.records[i].theta_hat);
  }
}

TEST_CASE("each replication is a function of its own seed") {
  const auto cfg = small_config();
  const auto truths = run_monte_carlo(cfg).truths;
  const auto a = run_replication(cfg, 60, 4, truths);
  auto shifted = cfg;
  shifted.replications = 1;
  const auto b = run_replication(shifted, 60, 4, truths);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].theta_hat == b[i].theta_hat);
  CHECK(run_replication(cfg, 60, 5, truths)[1].theta_hat != a[1].theta_hat);
}

TEST_CASE("noiseless linear outcome in the feature span gives full coverage") {
  MonteCarloConfig cfg;
  cfg.n_grid = {80};
  cfg.mu_grid = {-1.0, 0.0, 1.0};
  cfg.replications = 20;
  cfg.noise_sd = 0.0;
  cfg.outcome = Outcome::Linear;
  cfg.oracle_draws = 1'000'000;
  cfg.estimator.init = InitKind::Zero;
  cfg.estimator.basis = BasisKind::Polynomial;
  cfg.estimator.polynomial_degree = 1;
  cfg.estimator.boost_lambda = 1e-10;
  const auto res = run_monte_carlo(cfg);
  for (const auto& t : res.truths) CHECK(t.value == 1.0);
  for (double mu : cfg.mu_grid) {
    const auto* row = find_row(res.rows, 80, mu, Method::Boosted);
    REQUIRE(row != nullptr);
    CHECK(row->coverage == 1.0);
    CHECK(std::abs(row->mean_bias) <= 1e-6);
  }
}

TEST_CASE("invalid grids are rejected") {
  MonteCarloConfig cfg;
  cfg.replications = 0;
  CHECK_THROWS_AS(run_monte_carlo(cfg), Error);
  cfg.replications = 1;
  cfg.n_grid = {1};
  CHECK_THROWS_AS(run_monte_carlo(cfg), Error);
}
