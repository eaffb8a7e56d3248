#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "ridgeboost/boost.hpp"
#include "ridgeboost/error.hpp"
#include "ridgeboost/riesz.hpp"
#include "ridgeboost/sim.hpp"

using namespace ridgeboost;
using testing::random_matrix;
using testing::random_vector;

namespace {

Predictor smooth_truth() {
  return [](const Matrix& x) {
    return Vector(x.col(0).array().sin() + 0.5 * x.col(1).array() * x.col(0).array());
  };
}

/// Unpenalized least squares on [1, x]; reproduces constants exactly.
Predictor ols_with_intercept(const Matrix& x, const Vector& y) {
  Matrix design(x.rows(), x.cols() + 1);
  design << Vector::Ones(x.rows()), x;
  const Vector coef = design.colPivHouseholderQr().solve(y);
  return [coef](const Matrix& u) {
    return Vector(coef(0) + (u * coef.tail(coef.size() - 1)).array());
  };
}

struct Setup {
  Matrix x;
  Vector y;
  Kernel kernel;
  Predictor init;
};

Setup noisy_setup(std::uint64_t seed, Eigen::Index n) {
  std::mt19937_64 rng(seed);
  Setup s;
  s.x = random_matrix(rng, n, 2);
  s.y = smooth_truth()(s.x) + 0.5 * random_vector(rng, n);
  s.kernel = Kernel::rbf(1.0);
  s.init = make_predictor(fit_ridge_dual(s.kernel, s.x, s.y, 0.1));
  return s;
}

}  // namespace

TEST_CASE("exact initial predictor leaves nothing to boost") {
  std::mt19937_64 rng(1);
  const Matrix x = random_matrix(rng, 30, 2);
  const Vector y = smooth_truth()(x);
  const auto model = fit_boost(x, y, smooth_truth(), Kernel::rbf(1.0), 0.01);
  const Matrix x_new = random_matrix(rng, 7, 2);
  CHECK(model.predict_boost(x_new).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((model.predict(x_new) - smooth_truth()(x_new)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(model.mae_before() <= 1e-14);
}

TEST_CASE("zero initial predictor reduces to plain ridge") {
  std::mt19937_64 rng(2);
  const Matrix x = random_matrix(rng, 40, 3);
  const Vector y = random_vector(rng, 40);
  const Matrix x_new = random_matrix(rng, 5, 3);
  const auto dual = fit_boost(x, y, zero_predictor(), Kernel::rbf(1.3), 0.02);
  CHECK((dual.predict(x_new) - predict(fit_ridge_dual(Kernel::rbf(1.3), x, y, 0.02), x_new))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  const auto map = FeatureMap::polynomial(3, 2);
  const auto primal = fit_boost(x, y, zero_predictor(), map, 0.02);
  CHECK(primal.is_primal());
  CHECK((primal.predict(x_new) - predict(fit_ridge_primal(map, x, y, 0.02), x_new))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("gamma_ma is init plus boost and never raises training MSE") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = noisy_setup(seed, 50);
    std::mt19937_64 rng(seed + 100);
    const double lam = std::pow(10.0, -3.0 + 3.0 * std::uniform_real_distribution<double>()(rng));
    for (const BoostBasis& basis : {BoostBasis(Kernel::rbf(0.7)), BoostBasis(sample_rff(0.7, 2, 10, seed))}) {
      const auto model = fit_boost(s.x, s.y, s.init, basis, lam);
      const Matrix x_new = random_matrix(rng, 4, 2);
      CHECK(model.predict(x_new) == Vector(model.predict_init(x_new) + model.predict_boost(x_new)));
      CHECK(model.boosted_residuals().squaredNorm() <= model.init_residuals().squaredNorm());
      CHECK((model.init_residuals() - (s.y - s.init(s.x))).norm() <= 1e-12);
    }
  }
  const auto s = noisy_setup(0, 10);
  CHECK_THROWS_AS(fit_boost(s.x, s.y, s.init, Kernel::rbf(1.0), 0.0), Error);
}

TEST_CASE("noiseless self-target missing mean") {
  std::mt19937_64 rng(3);
  const Matrix x = random_matrix(rng, 60, 2);
  const Vector y = smooth_truth()(x);
  const auto model = fit_boost(x, y, smooth_truth(), Kernel::rbf(1.0), 0.01);
  const auto est = estimate(model, missing_mean_functional(x));
  CHECK(est.theta_hat == doctest::Approx(y.mean()).epsilon(1e-12));
  // the source term vanishes; only the per-unit spread remains
  const double s_q2 = (y.array() - y.mean()).square().sum() / 59.0;
  CHECK(est.std_error == doctest::Approx(std::sqrt(s_q2 / 60.0)).epsilon(1e-10));
  CHECK(est.ci_low <= est.theta_hat);
  CHECK(est.theta_hat <= est.ci_high);
  CHECK(est.ci_high - est.theta_hat == doctest::Approx(kNormalQuantile975 * est.std_error));
}

TEST_CASE("zero-weight functional") {
  const auto s = noisy_setup(4, 30);
  const auto model = fit_boost(s.x, s.y, s.init, s.kernel, 0.01);
  const auto est = estimate(model, make_functional(s.x.topRows(5), Vector::Zero(5), "zero"));
  CHECK(est.theta_hat == 0.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("boosting correction equals the riesz-weighted residual mean") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto s = noisy_setup(seed, 45);
    std::mt19937_64 rng(seed);
    const Matrix xq = random_matrix(rng, 20, 2);
    for (const auto& theta : {missing_mean_functional(xq), average_derivative_functional(xq, {0, 0.1}),
                              counterfactual_mean_functional(xq, 1, 0.3)}) {
      for (double lam : {1e-3, 0.1}) {
        const auto model = fit_boost(s.x, s.y, s.init, s.kernel, lam);
        const auto est = estimate(model, theta);
        const Vector alpha = fit_riesz_dual(s.kernel, s.x, theta, lam).train_values;
        const double correction = alpha.dot(s.y - s.init(s.x)) / 45.0;
        CHECK(std::abs(est.theta_hat - est.theta_init - correction) <=
              1e-8 * (1.0 + std::abs(est.theta_hat)));
        CHECK(est.equivalence_residual <= 1e-8 * (1.0 + std::abs(correction)));
      }
    }
  }
}

TEST_CASE("primal basis estimate uses the same identity") {
  const auto s = noisy_setup(20, 60);
  const auto map = sample_rff(1.0, 2, 12, 5);
  const auto model = fit_boost(s.x, s.y, s.init, map, 0.05);
  const auto theta = average_derivative_functional(s.x, {1, 0.2});
  const auto est = estimate(model, theta);
  const Matrix phi = map.apply(s.x);
  const auto riesz = fit_riesz_primal(phi, functional_on_features(theta, map), 0.05);
  const double correction = implied_weights_features(riesz, phi).dot(model.init_residuals()) / 60.0;
  CHECK(est.theta_hat - est.theta_init == doctest::Approx(correction).epsilon(1e-9));
  CHECK(est.equivalence_residual <= 1e-8 * (1 + std::abs(est.theta_hat)));
}

TEST_CASE("outcome shifts move mean functionals and leave derivatives alone") {
  std::mt19937_64 rng(6);
  const Matrix x = random_matrix(rng, 50, 2);
  const Vector y = smooth_truth()(x) + 0.3 * random_vector(rng, 50);
  const Matrix xq = random_matrix(rng, 15, 2);
  const double c = 3.7;
  const Vector y_shift = y.array() + c;
  const auto model = fit_boost(x, y, ols_with_intercept(x, y), Kernel::rbf(1.0), 0.01);
  const auto shifted = fit_boost(x, y_shift, ols_with_intercept(x, y_shift), Kernel::rbf(1.0), 0.01);
  for (const auto& theta : {missing_mean_functional(xq), counterfactual_mean_functional(xq, 0, 1.0)}) {
    CHECK(std::abs(estimate(shifted, theta).theta_hat - estimate(model, theta).theta_hat - c) <= 1e-8);
  }
  const auto deriv = average_derivative_functional(xq, {0, 0.1});
  CHECK(std::abs(estimate(shifted, deriv).theta_hat - estimate(model, deriv).theta_hat) <= 1e-8);
}

TEST_CASE("profile matches estimate, reports failures and is order free") {
  const auto s = noisy_setup(7, 40);
  const auto model = fit_boost(s.x, s.y, s.init, s.kernel, 0.01);
  std::mt19937_64 rng(7);
  const Matrix xq = random_matrix(rng, 10, 2);
  const auto a = missing_mean_functional(xq);
  const auto b = average_derivative_functional(xq, {1, 0.1});
  const auto c = counterfactual_mean_functional(xq, 0, -0.5);

  const auto single = profile(model, {a});
  REQUIRE(single.size() == 1);
  CHECK(single[0].ok());
  CHECK(single[0].estimate.theta_hat == estimate(model, a).theta_hat);
  CHECK(single[0].estimate.std_error == estimate(model, a).std_error);

  const auto abc = profile(model, {a, b, c});
  const auto cab = profile(model, {c, a, b});
  CHECK(abc[0].estimate.theta_hat == cab[1].estimate.theta_hat);
  CHECK(abc[1].estimate.theta_hat == cab[2].estimate.theta_hat);
  CHECK(abc[2].estimate.theta_hat == cab[0].estimate.theta_hat);
  CHECK(abc[2].estimate.std_error == cab[0].estimate.std_error);

  const auto bad = make_functional(Matrix::Zero(2, 3), Vector::Ones(2), "wrong_dim");
  const auto mixed = profile(model, {a, bad});
  CHECK(mixed[0].ok());
  CHECK_FALSE(mixed[1].ok());
  CHECK(std::isnan(mixed[1].estimate.theta_hat));
  CHECK_THROWS_AS(profile(model, {}), Error);
}

TEST_CASE("counterfactual profile tracks a known age effect") {
  std::mt19937_64 rng(8);
  const Eigen::Index n = 400;
  Matrix x(n, 2);
  std::uniform_real_distribution<double> age(60.0, 95.0);
  std::normal_distribution<double> normal;
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = age(rng);
    x(i, 1) = normal(rng);
    y(i) = 100.0 - x(i, 0) + normal(rng);
  }
  const auto scaling = Standardizer::fit(x);
  const double bw = median_heuristic_bandwidth(scaling.apply(x));
  const Kernel k = Kernel::rbf(bw).with_input_scaling(scaling);
  const double nd = static_cast<double>(n);
  const auto init = make_predictor(fit_ridge_dual(k, x, y, std::pow(nd, -0.5)));
  const auto model = fit_boost(x, y, init, k, std::pow(nd, -1.5));
  std::vector<LinearFunctional> family;
  for (int a = 65; a <= 89; ++a) family.push_back(counterfactual_mean_functional(x, 0, a));
  const auto out = profile(model, family);
  REQUIRE(out.size() == 25);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double truth = 100.0 - (65.0 + static_cast<double>(i));
    CHECK(out[i].ok());
    CHECK(std::abs(out[i].estimate.theta_hat - truth) <= 2.0 * out[i].estimate.std_error);
  }
}

TEST_CASE("simulation design: estimates land within 3 SE of the truth") {
  // truth at mu = 0 from the frozen oracle value (exactly 0.7 by symmetry)
  const double truth = 0.7;
  sim::MonteCarloConfig cfg;
  cfg.n_grid = {500};
  cfg.mu_grid = {0.0};
  int within = 0;
  const int reps = 200;
  const std::vector<sim::OracleTruth> truths = {{truth, 0.0, 0}};
  for (int r = 0; r < reps; ++r) {
    const auto recs = sim::run_replication(cfg, 500, r, truths);
    for (const auto& rec : recs) {
      if (rec.method == sim::Method::Boosted && std::abs(rec.theta_hat - truth) <= 3.0 * rec.std_error) ++within;
    }
  }
  MESSAGE("within 3 SE: " << within << " of " << reps);
  CHECK(within >= static_cast<int>(std::ceil(0.93 * reps)));
}

TEST_CASE("CI width shrinks like n^-1/2") {
  sim::MonteCarloConfig cfg;
  cfg.mu_grid = {0.0};
  const std::vector<sim::OracleTruth> truths = {{0.7, 0.0, 0}};
  auto mean_width = [&](Eigen::Index n) {
    double total = 0.0;
    for (int r = 0; r < 100; ++r) {
      for (const auto& rec : sim::run_replication(cfg, n, r, truths)) {
        if (rec.method == sim::Method::Boosted) total += 2.0 * kNormalQuantile975 * rec.std_error;
      }
    }
    return total / 100.0;
  };
  const double ratio = mean_width(400) / mean_width(200);
  MESSAGE("width ratio n=400 vs 200: " << ratio);
  CHECK(ratio >= 0.6);
  CHECK(ratio <= 0.82);
}

TEST_CASE("sample variance") {
  CHECK(sample_variance((Vector(3) << 1, 2, 3).finished()) == doctest::Approx(1.0));
  CHECK(sample_variance(Vector::Constant(1, 5.0)) == 0.0);
}
