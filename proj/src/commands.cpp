#include "ridgeboost/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>

#include "ridgeboost/audit.hpp"
#include "ridgeboost/error.hpp"
#include "ridgeboost/riesz.hpp"
#include "ridgeboost/svg.hpp"

namespace ridgeboost::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "': " + why);
}

double parse_number(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    config_error(key, "'" + text + "' is not a number");
  }
  return v;
}

void write_resolved(const RunConfig& cfg, const fs::path& out_dir,
                    const std::vector<std::string>& notes = {}) {
  write_text(out_dir / "resolved.cfg", cfg.resolved_text(notes));
}

Eigen::Index resolve_column(const std::string& token, const std::vector<std::string>& columns) {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == token) return static_cast<Eigen::Index>(j);
  }
  char* end = nullptr;
  const long idx = std::strtol(token.c_str(), &end, 10);
  if (!token.empty() && end == token.c_str() + token.size() && idx >= 0 &&
      idx < static_cast<long>(columns.size())) {
    return idx;
  }
  config_error("functional", "unknown covariate column '" + token + "'");
}

std::vector<double> parse_grid(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_number("functional", text)};
  const double lo = parse_number("functional", trim(text.substr(0, dots)));
  std::string rest = text.substr(dots + 2);
  double step = 1.0;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    step = parse_number("functional", trim(rest.substr(colon + 1)));
    rest = rest.substr(0, colon);
  }
  const double hi = parse_number("functional", trim(rest));
  if (!(step > 0.0) || hi < lo) config_error("functional", "bad grid '" + text + "'");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- functionals

std::vector<LinearFunctional> parse_functionals(const std::string& spec, const Matrix& x_eval,
                                                const std::vector<std::string>& columns,
                                                double diff_step_factor) {
  std::vector<LinearFunctional> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    std::string name = item;
    std::vector<std::pair<std::string, std::string>> args;
    if (const auto open = item.find('('); open != std::string::npos) {
      if (item.back() != ')') config_error("functional", "unbalanced parentheses in '" + item + "'");
      name = trim(item.substr(0, open));
      std::stringstream as(item.substr(open + 1, item.size() - open - 2));
      std::string arg;
      int position = 0;
      while (std::getline(as, arg, ',')) {
        arg = trim(arg);
        if (arg.empty()) continue;
        if (const auto eq = arg.find('='); eq != std::string::npos) {
          args.emplace_back(trim(arg.substr(0, eq)), trim(arg.substr(eq + 1)));
        } else {
          args.emplace_back(position == 0 ? "j" : position == 1 ? (name == "counterfactual" ? "a" : "h") : "?",
                            arg);
        }
        ++position;
      }
    }
    auto arg_of = [&](const std::string& key) -> const std::string* {
      for (const auto& [k, v] : args) {
        if (k == key) return &v;
      }
      return nullptr;
    };
    for (const auto& [k, v] : args) {
      const bool known = (name == "avg_derivative" && (k == "j" || k == "h")) ||
                         (name == "counterfactual" && (k == "j" || k == "a"));
      if (!known) config_error("functional", "unexpected argument '" + k + "' in '" + item + "'");
    }

    if (name == "missing_mean") {
      out.push_back(missing_mean_functional(x_eval));
    } else if (name == "avg_derivative") {
      const auto* j = arg_of("j");
      DiffSpec d;
      d.coordinate = j ? resolve_column(*j, columns) : 0;
      const auto* h = arg_of("h");
      d.step = h ? parse_number("functional", *h) : default_diff_step(x_eval, d.coordinate, diff_step_factor);
      if (!(d.step > 0.0)) config_error("functional", "step h must be > 0");
      auto f = average_derivative_functional(x_eval, d);
      f.label = "avg_derivative(j=" + columns[static_cast<std::size_t>(d.coordinate)] +
                ";h=" + short_number(d.step) + ")";
      out.push_back(std::move(f));
    } else if (name == "counterfactual") {
      const auto* j = arg_of("j");
      const auto* a = arg_of("a");
      if (!j || !a) config_error("functional", "counterfactual needs j and a");
      const Eigen::Index col = resolve_column(*j, columns);
      for (double value : parse_grid(*a)) {
        auto f = counterfactual_mean_functional(x_eval, col, value);
        f.label = "counterfactual(j=" + columns[static_cast<std::size_t>(col)] +
                  ";a=" + short_number(value) + ")";
        out.push_back(std::move(f));
      }
    } else {
      config_error("functional", "unknown functional '" + name + "'");
    }
  }
  if (out.empty()) config_error("functional", "no functional given");
  return out;
}

// ------------------------------------------------------------------ pipeline

Pipeline build_pipeline(const RunConfig& cfg) {
  const std::string& source_path = cfg.get("source");
  if (source_path.empty()) config_error("source", "a source CSV is required");
  Pipeline p;
  p.source = split_outcome(read_csv(source_path), cfg.get("outcome"), true);
  const Matrix& x = p.source.x;
  const Vector& y = *p.source.y;
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 2) throw Error(ErrorKind::EmptyData, "source needs at least 2 rows");

  if (const std::string& target_path = cfg.get("target"); !target_path.empty()) {
    const auto target = read_csv(target_path);
    p.x_eval.resize(target.rows(), d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& name = p.source.covariate_names[static_cast<std::size_t>(j)];
      const auto col = target.find(name);
      if (!col) throw Error(ErrorKind::SchemaError, target_path + ": missing covariate column '" + name + "'");
      p.x_eval.col(j) = target.data.col(*col);
    }
  } else {
    p.x_eval = x;
  }

  const Standardizer scaling = cfg.get_bool("standardize") ? Standardizer::fit(x) : Standardizer{};
  const double bw_factor = cfg.get_double("bandwidth_factor");
  p.bandwidth = cfg.is_auto("bandwidth") ? bw_factor * median_heuristic_bandwidth(scaling.apply(x))
                                         : bw_factor * cfg.get_double("bandwidth");
  const int degree = static_cast<int>(cfg.get_int("kernel_degree"));
  const double offset = cfg.get_double("kernel_offset");

  Kernel kernel;
  const std::string& kind = cfg.get("kernel");
  if (kind == "rbf") {
    kernel = Kernel::rbf(p.bandwidth);
    p.notes.push_back("bandwidth resolved to " + format_double(p.bandwidth));
  } else if (kind == "linear") {
    kernel = Kernel::linear();
  } else {
    kernel = Kernel::polynomial(degree, offset);
  }
  kernel = kernel.with_input_scaling(scaling);

  const double nd = static_cast<double>(n);
  p.init_lambda = cfg.is_auto("init_lambda") ? std::pow(nd, -0.5) : cfg.get_double("init_lambda");
  p.lambda = cfg.is_auto("lambda") ? std::pow(nd, -1.5) : cfg.get_double("lambda");

  Predictor init = zero_predictor();
  if (cfg.get("init") == "krr") {
    init = make_predictor(fit_ridge_dual(kernel, x, y, p.init_lambda));
    p.notes.push_back("init_lambda resolved to " + format_double(p.init_lambda));
  }

  BoostBasis basis = kernel;
  const std::string& features = cfg.get("boost_features");
  if (features == "rff") {
    basis = sample_rff(p.bandwidth, d, cfg.get_int("rff_features"), cfg.get_uint("seed"))
                .with_input_scaling(scaling);
  } else if (features == "identity") {
    basis = FeatureMap::identity(d).with_input_scaling(scaling);
  } else if (features == "polynomial") {
    basis = FeatureMap::polynomial_kernel(d, degree, offset).with_input_scaling(scaling);
  }
  p.notes.push_back("lambda resolved to " + format_double(p.lambda));
  p.notes.push_back("source rows " + std::to_string(n) + ", evaluation rows " +
                    std::to_string(p.x_eval.rows()));

  p.model = fit_boost(x, y, std::move(init), basis, p.lambda);
  return p;
}

// ------------------------------------------------------------------ simulate

sim::MonteCarloConfig monte_carlo_config(const RunConfig& cfg) {
  if (cfg.get("kernel") != "rbf") config_error("kernel", "simulate supports only rbf");
  if (!cfg.is_auto("bandwidth")) {
    config_error("bandwidth", "simulate picks the bandwidth per replication (use bandwidth_factor)");
  }
  sim::MonteCarloConfig mc;
  mc.n_grid.clear();
  for (double v : cfg.get_double_list("n_grid")) mc.n_grid.push_back(static_cast<Eigen::Index>(v));
  mc.mu_grid = cfg.get_double_list("mu_grid");
  mc.replications = static_cast<int>(cfg.get_int("replications"));
  mc.base_seed = cfg.get_uint("seed");
  mc.n_target = cfg.get_int("n_target");
  mc.oracle_draws = cfg.get_uint("oracle_draws");
  mc.oracle_seed = cfg.get_uint("oracle_seed");
  mc.noise_sd = cfg.get_double("noise_sd");
  mc.outcome = cfg.get("dgp_outcome") == "linear" ? sim::Outcome::Linear : sim::Outcome::Nonlinear;
  mc.threads = static_cast<int>(cfg.get_int("threads"));

  auto& est = mc.estimator;
  est.init = cfg.get("init") == "krr" ? sim::InitKind::KernelRidge : sim::InitKind::Zero;
  est.init_lambda = cfg.is_auto("init_lambda") ? -1.0 : cfg.get_double("init_lambda");
  est.boost_lambda = cfg.is_auto("lambda") ? -1.0 : cfg.get_double("lambda");
  const std::string& features = cfg.get("boost_features");
  est.basis = features == "rff"          ? sim::BasisKind::Rff
              : features == "identity"   ? sim::BasisKind::Linear
              : features == "polynomial" ? sim::BasisKind::Polynomial
                                         : sim::BasisKind::RbfKernel;
  est.rff_features = cfg.get_int("rff_features");
  est.polynomial_degree = static_cast<int>(cfg.get_int("kernel_degree"));
  est.polynomial_offset = cfg.get_double("kernel_offset");
  est.bandwidth_factor = cfg.get_double("bandwidth_factor");
  est.standardize = cfg.get_bool("standardize");
  est.diff_step_factor = cfg.get_double("diff_step_factor");
  est.residuals = cfg.get("variance_residuals") == "boosted" ? VarianceResiduals::Boosted
                                                             : VarianceResiduals::Initial;
  return mc;
}

std::string coverage_csv(const sim::MonteCarloResult& result) {
  std::ostringstream os;
  os << "n,mu_target,method,coverage,mean_ci_width,mean_bias,replications\n";
  for (const auto& r : result.rows) {
    os << r.n << "," << format_double(r.mu_target) << "," << sim::to_string(r.method) << ","
       << format_double(r.coverage) << "," << format_double(r.mean_ci_width) << ","
       << format_double(r.mean_bias) << "," << r.replications << "\n";
  }
  int failed = 0;
  for (int f : result.failures) failed += f;
  os << "# failed_replications=" << failed << "\n";
  for (const auto& t : result.truths) {
    os << "# truth value=" << format_double(t.value) << " std_error=" << format_double(t.std_error)
       << " draws=" << t.draws << "\n";
  }
  return os.str();
}

int cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto mc = monte_carlo_config(cfg);
  const auto result = sim::run_monte_carlo(mc);
  for (const auto& msg : result.failure_messages) log << "replication failed: " << msg << "\n";
  write_text(out_dir / "coverage.csv", coverage_csv(result));
  write_text(out_dir / "figure1.svg", coverage_figure_svg(result.rows));
  std::vector<std::string> notes;
  for (std::size_t k = 0; k < mc.mu_grid.size(); ++k) {
    notes.push_back("truth at mu=" + format_double(mc.mu_grid[k]) + " is " +
                    format_double(result.truths[k].value));
  }
  write_resolved(cfg, out_dir, notes);
  log << "wrote " << result.rows.size() << " coverage rows to " << (out_dir / "coverage.csv").string()
      << "\n";
  return 0;
}

// ------------------------------------------------------------ estimate/profile

std::string estimates_csv(const std::vector<ProfileEntry>& entries) {
  std::ostringstream os;
  os << "label,theta_hat,std_error,ci_low,ci_high,mae_before,mae_after,equivalence_residual,"
        "theta_init,v_plugin,n_source,n_target,status\n";
  for (const auto& e : entries) {
    const auto& p = e.estimate;
    std::string status = e.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    os << p.label << "," << format_double(p.theta_hat) << "," << format_double(p.std_error) << ","
       << format_double(p.ci_low) << "," << format_double(p.ci_high) << ","
       << format_double(p.mae_before) << "," << format_double(p.mae_after) << ","
       << format_double(p.equivalence_residual) << "," << format_double(p.theta_init) << ","
       << format_double(p.v_plugin) << "," << p.n_source << "," << p.n_target << "," << status
       << "\n";
  }
  return os.str();
}

namespace {

int estimate_family(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log,
                    const std::string& file) {
  const Pipeline p = build_pipeline(cfg);
  const auto family = parse_functionals(cfg.get("functional"), p.x_eval, p.source.covariate_names,
                                        cfg.get_double("diff_step_factor"));
  EstimateOptions opts;
  opts.residuals = cfg.get("variance_residuals") == "boosted" ? VarianceResiduals::Boosted
                                                              : VarianceResiduals::Initial;
  opts.check_equivalence = cfg.get_bool("equivalence");
  const auto entries = profile(p.model, family, opts);
  write_text(out_dir / file, estimates_csv(entries));
  write_resolved(cfg, out_dir, p.notes);

  int failed = 0;
  for (const auto& e : entries) {
    if (!e.ok()) {
      ++failed;
      log << e.estimate.label << ": " << e.status << "\n";
    }
  }
  log << "wrote " << entries.size() << " rows to " << (out_dir / file).string() << "\n";
  return failed == 0 ? 0 : exit_code_for(ErrorKind::NotFactorizable);
}

}  // namespace

int cmd_estimate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  return estimate_family(cfg, out_dir, log, "estimates.csv");
}

int cmd_profile(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  return estimate_family(cfg, out_dir, log, "profile.csv");
}

// --------------------------------------------------------------------- audit

int cmd_audit(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const Pipeline p = build_pipeline(cfg);
  MaeReport report;
  if (const std::string& holdout = cfg.get("holdout"); !holdout.empty()) {
    const auto h = split_outcome(read_csv(holdout), cfg.get("outcome"), true);
    if (h.covariate_names != p.source.covariate_names) {
      throw Error(ErrorKind::SchemaError, holdout + ": covariate columns differ from the source");
    }
    report = audit(p.model, h.x, *h.y);
  } else {
    report = audit(p.model);
  }

  std::ostringstream os;
  os << "n,lambda,mae_init,mae_boosted,contraction_factor,bound,holdout_mae\n";
  os << p.model.n_train() << "," << format_double(p.lambda) << "," << format_double(report.mae_init)
     << "," << format_double(report.mae_boosted) << "," << format_double(report.contraction_factor)
     << "," << (report.bound_holds ? "PASS" : "FAIL") << ","
     << (report.holdout_mae ? format_double(*report.holdout_mae) : std::string("nan")) << "\n";
  write_text(out_dir / "audit.csv", os.str());

  std::ostringstream eig;
  eig << "index,eigenvalue\n";
  for (std::size_t j = 0; j < report.eigenvalues.size(); ++j) {
    eig << j << "," << format_double(report.eigenvalues[j]) << "\n";
  }
  write_text(out_dir / "audit_eigenvalues.csv", eig.str());
  write_resolved(cfg, out_dir, p.notes);

  log << "contraction bound " << (report.bound_holds ? "PASS" : "FAIL") << ": mae "
      << format_double(report.mae_init) << " -> " << format_double(report.mae_boosted)
      << ", factor " << format_double(report.contraction_factor) << "\n";
  return report.bound_holds ? 0 : exit_code_for(ErrorKind::NoConvergence);
}

// ------------------------------------------------------- equivalence checking

std::string to_string(FunctionalType t) {
  switch (t) {
    case FunctionalType::MissingMean:
      return "missing_mean";
    case FunctionalType::AverageDerivative:
      return "avg_derivative";
    case FunctionalType::Counterfactual:
      return "counterfactual";
  }
  return "?";
}

EquivalenceSuite run_equivalence_suite(int instances, std::uint64_t seed, double perturb_beta,
                                       const std::vector<FunctionalType>& types) {
  if (instances < 1 || types.empty()) {
    throw Error(ErrorKind::InvalidParameter, "equivalence suite needs instances and types");
  }
  static constexpr double kLambdas[] = {1e-3, 1e-1, 1.0, 10.0};
  EquivalenceSuite suite;
  for (int i = 0; i < instances; ++i) {
    std::mt19937_64 rng(seed * 1'000'003ULL + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto uniform_int = [&](int lo, int hi) {
      return std::uniform_int_distribution<int>(lo, hi)(rng);
    };

    EquivalenceCase c;
    c.type = types[static_cast<std::size_t>(i) % types.size()];
    c.lambda = kLambdas[(static_cast<std::size_t>(i) / types.size()) % 4];
    c.n = uniform_int(10, 80);
    const Eigen::Index d = uniform_int(1, 3);
    const Eigen::Index m = uniform_int(5, 40);

    Matrix x(c.n, d), xq(m, d);
    for (Eigen::Index r = 0; r < c.n; ++r)
      for (Eigen::Index j = 0; j < d; ++j) x(r, j) = normal(rng);
    const double shift = normal(rng);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index j = 0; j < d; ++j) xq(r, j) = shift + normal(rng);
    Vector z(c.n);
    for (Eigen::Index r = 0; r < c.n; ++r) z(r) = std::sin(2.0 * x(r, 0)) + x.row(r).sum() + normal(rng);

    const Eigen::Index coord = uniform_int(0, static_cast<int>(d) - 1);
    LinearFunctional theta;
    switch (c.type) {
      case FunctionalType::MissingMean:
        theta = missing_mean_functional(xq);
        break;
      case FunctionalType::AverageDerivative:
        theta = average_derivative_functional(xq, DiffSpec{coord, 0.05 + 0.2 * unif(rng)});
        break;
      case FunctionalType::Counterfactual:
        theta = counterfactual_mean_functional(xq, coord, normal(rng));
        break;
    }

    const int basis = uniform_int(0, 3);
    if (basis == 3) {
      c.basis = "rbf_kernel";
      c.dim = c.n;
      const Kernel k = Kernel::rbf(0.5 + 1.5 * unif(rng));
      c.report = equivalence_report_dual(k, x, z, theta, c.lambda);
    } else {
      FeatureMap map = FeatureMap::identity(d);
      if (basis == 0) {
        c.basis = "identity";
      } else if (basis == 1) {
        c.basis = "polynomial";
        map = FeatureMap::polynomial_kernel(d, 2, 1.0);
      } else {
        c.basis = "rff";
        map = sample_rff(0.5 + 1.5 * unif(rng), d, uniform_int(2, 12), rng());
      }
      const Matrix phi = map.apply(x);
      c.dim = phi.cols();
      EquivalenceOptions opts;
      opts.perturb_beta = perturb_beta;
      c.report = equivalence_report(phi, z, functional_on_features(theta, map), c.lambda, opts);
    }

    suite.max_discrepancy = std::max(suite.max_discrepancy, c.report.discrepancy);
    suite.max_ratio = std::max(suite.max_ratio, c.report.discrepancy / c.report.tolerance);
    if (!c.report.passed) ++suite.failures;
    suite.cases.push_back(std::move(c));
  }
  return suite;
}

int cmd_check_equivalence(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto suite = run_equivalence_suite(static_cast<int>(cfg.get_int("instances")),
                                           cfg.get_uint("seed"), cfg.get_double("perturb_beta"));
  std::ostringstream os;
  os << "instance,functional,basis,n,dim,lambda,ridge_side,riesz_side,discrepancy,tolerance,passed\n";
  for (std::size_t i = 0; i < suite.cases.size(); ++i) {
    const auto& c = suite.cases[i];
    os << i << "," << to_string(c.type) << "," << c.basis << "," << c.n << "," << c.dim << ","
       << format_double(c.lambda) << "," << format_double(c.report.ridge_side) << ","
       << format_double(c.report.riesz_side) << "," << format_double(c.report.discrepancy) << ","
       << format_double(c.report.tolerance) << "," << (c.report.passed ? 1 : 0) << "\n";
  }
  write_text(out_dir / "equivalence.csv", os.str());
  write_resolved(cfg, out_dir);

  log << "instances " << suite.cases.size() << ", failures " << suite.failures
      << ", max discrepancy " << format_double(suite.max_discrepancy)
      << ", max discrepancy/tolerance " << format_double(suite.max_ratio) << "\n";
  log << (suite.passed() ? "equivalence holds" : "equivalence FAILED") << "\n";
  return suite.passed() ? 0 : 1;
}

// ----------------------------------------------------------------------- run

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Once-boosted ridge estimators for linear functionals", "ridgeboost"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::int64_t> seed;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed, "seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "extra key=value override, repeatable");

  using Handler = int (*)(const RunConfig&, const fs::path&, std::ostream&);
  const std::vector<std::pair<std::string, Handler>> commands = {
      {"simulate", cmd_simulate},
      {"estimate", cmd_estimate},
      {"audit", cmd_audit},
      {"check-equivalence", cmd_check_equivalence},
      {"profile", cmd_profile},
  };
  const std::vector<std::string> help = {
      "Monte Carlo coverage study: coverage.csv and figure1.svg",
      "Boosted estimates for the configured functionals: estimates.csv",
      "Multiaccuracy audit and contraction certificate: audit.csv",
      "Randomized ridge/Riesz identity checks",
      "Estimate a family of functionals from one model: profile.csv",
  };
  for (std::size_t i = 0; i < commands.size(); ++i) app.add_subcommand(commands[i].first, help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code_for(ErrorKind::ConfigError);
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "--set expects key=value, got '" + kv + "'");
      cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (seed) cfg.set("seed", std::to_string(*seed));

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::FileError, "cannot create output directory '" + out_dir + "'");

    for (const auto& [name, handler] : commands) {
      if (app.got_subcommand(name)) return handler(cfg, out_dir, out);
    }
    return exit_code_for(ErrorKind::ConfigError);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(ErrorKind::NotFactorizable);
  }
}

}  // namespace ridgeboost::cli
