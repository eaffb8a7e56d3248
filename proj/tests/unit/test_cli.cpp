#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "ridgeboost/commands.hpp"
#include "ridgeboost/csv.hpp"

namespace fs = std::filesystem;
using namespace ridgeboost;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"ridgeboost"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ridgeboost_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// y = 1 + 2 x1 - 0.01 age (+ noise), age uniform on [60, 95].
void write_synthetic(const fs::path& path, int n, double noise, bool with_outcome, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> age(60.0, 95.0);
  std::ostringstream os;
  os << (with_outcome ? "x1,age,y\n" : "x1,age\n");
  for (int i = 0; i < n; ++i) {
    const double x1 = normal(rng), a = age(rng);
    const double y = 1.0 + 2.0 * x1 - 0.01 * a + noise * normal(rng);
    os << format_double(x1) << "," << format_double(a);
    if (with_outcome) os << "," << format_double(y);
    os << "\n";
  }
  write_text(path, os.str());
}

int count_data_lines(const std::string& csv) {
  int lines = 0;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("simulate: minimal grid, determinism and resolved config") {
  const auto dir = scratch("simulate");
  const std::vector<std::string> base = {"simulate", "--set", "replications=1", "--set", "n_grid=50",
                                         "--set", "mu_grid=0", "--set", "oracle_draws=1000000"};
  auto args = base;
  args.insert(args.end(), {"--out", (dir / "a").string()});
  const auto a = run_cli(args);
  REQUIRE(a.code == 0);
  const std::string coverage = slurp(dir / "a" / "coverage.csv");
  CHECK(count_data_lines(coverage) == 2);
  CHECK(coverage.find("# failed_replications=0") != std::string::npos);
  CHECK(fs::exists(dir / "a" / "figure1.svg"));
  CHECK(slurp(dir / "a" / "figure1.svg").find("<svg") == 0);
  CHECK(fs::exists(dir / "a" / "resolved.cfg"));

  args = base;
  args.insert(args.end(), {"--out", (dir / "b").string(), "--set", "threads=2"});
  REQUIRE(run_cli(args).code == 0);
  CHECK(slurp(dir / "b" / "coverage.csv") == coverage);

  const auto c = run_cli({"simulate", "--config", (dir / "a" / "resolved.cfg").string(), "--out",
                          (dir / "c").string()});
  REQUIRE(c.code == 0);
  CHECK(slurp(dir / "c" / "coverage.csv") == coverage);
  CHECK(slurp(dir / "c" / "resolved.cfg") == slurp(dir / "a" / "resolved.cfg"));
}

TEST_CASE("config errors exit with code 2 and name the key") {
  const auto dir = scratch("config");
  auto r = run_cli({"simulate", "--set", "replicates=3", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("replicates") != std::string::npos);
  write_text(dir / "bad.cfg", "seed = 1\nkernel = laplace\n");
  r = run_cli({"simulate", "--config", (dir / "bad.cfg").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("kernel") != std::string::npos);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
}

TEST_CASE("seed flag overrides the config") {
  const auto dir = scratch("seed");
  REQUIRE(run_cli({"check-equivalence", "--seed", "31", "--set", "instances=3", "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "resolved.cfg").find("seed = 31\n") != std::string::npos);
}

TEST_CASE("estimate: self target on noiseless linear data") {
  const auto dir = scratch("estimate");
  write_synthetic(dir / "source.csv", 120, 0.0, true, 1);
  // target = source without the outcome column
  const auto table = read_csv(dir / "source.csv");
  std::ostringstream target;
  target << "x1,age\n";
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    target << format_double(table.data(i, 0)) << "," << format_double(table.data(i, 1)) << "\n";
  }
  write_text(dir / "target.csv", target.str());
  const std::string before = slurp(dir / "source.csv");

  const auto r = run_cli({"estimate", "--out", (dir / "out").string(), "--set",
                          "source=" + (dir / "source.csv").string(), "--set",
                          "target=" + (dir / "target.csv").string(), "--set", "kernel=polynomial", "--set",
                          "kernel_degree=1", "--set", "boost_features=polynomial", "--set", "init=zero",
                          "--set", "lambda=1e-10"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "out" / "estimates.csv"));
  CHECK(slurp(dir / "source.csv") == before);
}

TEST_CASE("estimate rows and values") {
  const auto dir = scratch("estimate_rows");
  write_synthetic(dir / "source.csv", 120, 0.0, true, 1);
  write_synthetic(dir / "target.csv", 80, 0.0, false, 2);
  const auto y = *split_outcome(read_csv(dir / "source.csv"), "y", true).y;

  auto r = run_cli({"estimate", "--out", (dir / "self").string(), "--set",
                    "source=" + (dir / "source.csv").string(), "--set", "kernel=polynomial", "--set",
                    "kernel_degree=1", "--set", "boost_features=polynomial", "--set", "init=zero", "--set",
                    "lambda=1e-10"});
  REQUIRE(r.code == 0);
  std::istringstream lines(slurp(dir / "self" / "estimates.csv"));
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header.rfind("label,theta_hat,std_error,ci_low,ci_high,mae_before,mae_after,equivalence_residual", 0) == 0);
  CHECK(row.rfind("missing_mean,", 0) == 0);
  const double theta = std::stod(row.substr(row.find(',') + 1));
  CHECK(theta == doctest::Approx(y.mean()).epsilon(1e-8));

  r = run_cli({"estimate", "--out", (dir / "cf").string(), "--set", "source=" + (dir / "source.csv").string(),
               "--set", "target=" + (dir / "target.csv").string(), "--set",
               "functional=counterfactual(j=age, a=65..89)"});
  REQUIRE(r.code == 0);
  const std::string cf = slurp(dir / "cf" / "estimates.csv");
  CHECK(count_data_lines(cf) == 25);
  CHECK(cf.find("counterfactual(j=age;a=89)") != std::string::npos);

  r = run_cli({"profile", "--out", (dir / "pf").string(), "--set", "source=" + (dir / "source.csv").string(),
               "--set", "functional=missing_mean; avg_derivative(j=x1); counterfactual(age, 70)"});
  REQUIRE(r.code == 0);
  CHECK(count_data_lines(slurp(dir / "pf" / "profile.csv")) == 3);

  r = run_cli({"estimate", "--out", (dir / "bad").string(), "--set", "source=" + (dir / "source.csv").string(),
               "--set", "functional=counterfactual(j=height, a=1)"});
  CHECK(r.code == 2);
}

TEST_CASE("data errors exit with code 3") {
  const auto dir = scratch("data");
  write_text(dir / "ragged.csv", "x1,age,y\n1,2,3\n4,5\n");
  auto r = run_cli({"estimate", "--out", dir.string(), "--set", "source=" + (dir / "ragged.csv").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 3") != std::string::npos);
  r = run_cli({"estimate", "--out", dir.string(), "--set", "source=" + (dir / "missing.csv").string()});
  CHECK(r.code == 3);
  write_synthetic(dir / "noy.csv", 10, 0.0, false, 3);
  r = run_cli({"estimate", "--out", dir.string(), "--set", "source=" + (dir / "noy.csv").string()});
  CHECK(r.code == 3);
}

TEST_CASE("audit") {
  const auto dir = scratch("audit");
  write_synthetic(dir / "train.csv", 100, 0.5, true, 4);
  write_synthetic(dir / "holdout.csv", 100, 0.5, true, 5);
  auto r = run_cli({"audit", "--out", (dir / "a").string(), "--set", "source=" + (dir / "train.csv").string(),
                    "--set", "holdout=" + (dir / "train.csv").string(), "--set", "lambda=1e-9"});
  REQUIRE(r.code == 0);
  std::istringstream in(slurp(dir / "a" / "audit.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "n,lambda,mae_init,mae_boosted,contraction_factor,bound,holdout_mae");
  CHECK(row.find(",PASS,") != std::string::npos);
  std::vector<std::string> fields;
  std::stringstream ss(row);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  CHECK(std::stod(fields[3]) <= 1e-3 * std::stod(fields[2]));
  CHECK(count_data_lines(slurp(dir / "a" / "audit_eigenvalues.csv")) == 100);

  for (const char* features : {"kernel", "rff", "identity", "polynomial"}) {
    r = run_cli({"audit", "--out", (dir / "b").string(), "--set", "source=" + (dir / "train.csv").string(),
                 "--set", "holdout=" + (dir / "holdout.csv").string(), "--set",
                 std::string("boost_features=") + features});
    CHECK(r.code == 0);
    CHECK(slurp(dir / "b" / "audit.csv").find(",PASS,") != std::string::npos);
  }
  r = run_cli({"audit", "--out", (dir / "c").string(), "--set", "source=" + (dir / "train.csv").string(),
               "--set", "lambda=0"});
  CHECK(r.code == 2);
}

TEST_CASE("check-equivalence exit codes") {
  const auto dir = scratch("equivalence");
  auto r = run_cli({"check-equivalence", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("max discrepancy") != std::string::npos);
  CHECK(count_data_lines(slurp(dir / "equivalence.csv")) == 100);
  CHECK(run_cli({"check-equivalence", "--out", dir.string(), "--set", "perturb_beta=1e-3"}).code == 1);
  for (const char* seed : {"1", "2", "99"}) {
    CHECK(run_cli({"check-equivalence", "--out", dir.string(), "--seed", seed}).code == 0);
  }
}

TEST_CASE("functional spec parsing") {
  Matrix x(3, 2);
  x << 1, 60, 2, 70, 3, 80;
  const std::vector<std::string> cols = {"x1", "age"};
  auto fs = cli::parse_functionals("counterfactual(j=age, a=65..89)", x, cols, 0.1);
  CHECK(fs.size() == 25);
  fs = cli::parse_functionals("counterfactual(1, 0..1:0.25)", x, cols, 0.1);
  CHECK(fs.size() == 5);
  fs = cli::parse_functionals("avg_derivative(j=age, h=0.5);missing_mean", x, cols, 0.1);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].label == "avg_derivative(j=age;h=0.5)");
  CHECK(fs[1].label == "missing_mean");
  CHECK_THROWS(cli::parse_functionals("median", x, cols, 0.1));
  CHECK_THROWS(cli::parse_functionals("avg_derivative(j=age, k=2)", x, cols, 0.1));
  CHECK_THROWS(cli::parse_functionals("counterfactual(j=age)", x, cols, 0.1));
  CHECK_THROWS(cli::parse_functionals("", x, cols, 0.1));
}

TEST_CASE("the installed binary maps errors to exit codes") {
  const char* exe = std::getenv("RIDGEBOOST_CLI");
  if (!exe) {
    MESSAGE("RIDGEBOOST_CLI not set; skipping");
    return;
  }
  const auto dir = scratch("binary");
  auto status = [&](const std::string& args) {
    const std::string cmd = std::string(exe) + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("check-equivalence --out " + dir.string()) == 0);
  CHECK(status("check-equivalence --set perturb_beta=1e-3 --out " + dir.string()) == 1);
  CHECK(status("simulate --set lambda=0 --out " + dir.string()) == 2);
  write_text(dir / "ragged.csv", "a,y\n1,2\n3\n");
  CHECK(status("estimate --set source=" + (dir / "ragged.csv").string() + " --out " + dir.string()) == 3);
  CHECK(status("--help") == 0);
}
