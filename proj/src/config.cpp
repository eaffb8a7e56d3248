#include "ridgeboost/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ridgeboost/error.hpp"

namespace ridgeboost {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_int(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "' = '" + value + "': " + why);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (v == o) return true;
  }
  return false;
}

void validate(const std::string& key, const std::string& v) {
  double d = 0.0;
  std::int64_t i = 0;
  auto positive_or_auto = [&] {
    if (v == "auto") return;
    if (!parse_double(v, d) || !(d > 0.0)) bad(key, v, "must be 'auto' or a number > 0");
  };
  auto positive_int = [&] {
    if (!parse_int(v, i) || i < 1) bad(key, v, "must be an integer >= 1");
  };
  auto nonneg_int = [&] {
    if (!parse_int(v, i) || i < 0) bad(key, v, "must be an integer >= 0");
  };
  auto number = [&] {
    if (!parse_double(v, d)) bad(key, v, "must be a number");
  };
  auto boolean = [&] {
    if (!one_of(v, {"true", "false", "1", "0"})) bad(key, v, "must be true or false");
  };
  auto number_list = [&] {
    std::stringstream ss(v);
    std::string item;
    int count = 0;
    while (std::getline(ss, item, ',')) {
      if (!parse_double(trim(item), d)) bad(key, v, "must be a comma-separated list of numbers");
      ++count;
    }
    if (count == 0) bad(key, v, "list is empty");
  };

  if (key == "lambda" || key == "init_lambda" || key == "bandwidth") {
    positive_or_auto();
    if (key == "lambda" && v != "auto" && !(d > 0.0)) bad(key, v, "lambda must be > 0");
  } else if (key == "seed" || key == "oracle_seed") {
    nonneg_int();
  } else if (key == "threads" || key == "replications" || key == "rff_features" ||
             key == "kernel_degree" || key == "instances") {
    positive_int();
  } else if (key == "n_target") {
    nonneg_int();
  } else if (key == "oracle_draws") {
    if (!parse_int(v, i) || i < 1'000'000) bad(key, v, "must be an integer >= 1000000");
  } else if (key == "kernel_offset" || key == "noise_sd" || key == "perturb_beta") {
    number();
    if (key != "perturb_beta" && d < 0.0) bad(key, v, "must be >= 0");
  } else if (key == "diff_step_factor" || key == "bandwidth_factor") {
    number();
    if (!(d > 0.0)) bad(key, v, "must be > 0");
  } else if (key == "standardize" || key == "equivalence") {
    boolean();
  } else if (key == "n_grid") {
    number_list();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!parse_int(trim(item), i) || i < 2) bad(key, v, "sample sizes must be integers >= 2");
    }
  } else if (key == "mu_grid") {
    number_list();
  } else if (key == "kernel") {
    if (!one_of(v, {"rbf", "linear", "polynomial"})) bad(key, v, "expected rbf|linear|polynomial");
  } else if (key == "init") {
    if (!one_of(v, {"krr", "zero"})) bad(key, v, "expected krr|zero");
  } else if (key == "boost_features") {
    if (!one_of(v, {"kernel", "rff", "identity", "polynomial"})) {
      bad(key, v, "expected kernel|rff|identity|polynomial");
    }
  } else if (key == "variance_residuals") {
    if (!one_of(v, {"initial", "boosted"})) bad(key, v, "expected initial|boosted");
  } else if (key == "dgp_outcome") {
    if (!one_of(v, {"nonlinear", "linear"})) bad(key, v, "expected nonlinear|linear");
  }
  // source/target/holdout/outcome/functional are free text, checked where used.
}

}  // namespace

const std::map<std::string, std::string>& RunConfig::defaults() {
  static const std::map<std::string, std::string> table = {
      {"seed", "0"},
      {"threads", "1"},
      // data
      {"source", ""},
      {"target", ""},
      {"holdout", ""},
      {"outcome", "y"},
      // models
      {"kernel", "rbf"},
      {"bandwidth", "auto"},
      {"bandwidth_factor", "1"},
      {"kernel_degree", "2"},
      {"kernel_offset", "1"},
      {"standardize", "true"},
      {"init", "krr"},
      {"init_lambda", "auto"},
      {"boost_features", "kernel"},
      {"rff_features", "512"},
      {"lambda", "auto"},
      {"variance_residuals", "initial"},
      {"equivalence", "true"},
      // functionals
      {"functional", "missing_mean"},
      {"diff_step_factor", "0.1"},
      // simulation
      {"n_grid", "100,300,500"},
      {"mu_grid", "-1,0,1"},
      {"replications", "500"},
      {"n_target", "0"},
      {"noise_sd", "2"},
      {"dgp_outcome", "nonlinear"},
      {"oracle_draws", "10000000"},
      {"oracle_seed", "271828"},
      // check-equivalence
      {"instances", "100"},
      {"perturb_beta", "0"},
  };
  return table;
}

RunConfig::RunConfig() : values_(defaults()) {}

RunConfig RunConfig::parse(std::string_view text, std::string_view origin) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, std::string(origin) + ":" + std::to_string(line_no) +
                                              ": expected key=value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError,
                  std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!defaults().contains(key)) throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
  validate(key, value);
  values_[key] = value;
  explicit_[key] = true;
}

bool RunConfig::is_default(const std::string& key) const { return !explicit_.contains(key); }

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  double d = 0.0;
  if (!parse_double(get(key), d)) bad(key, get(key), "not a number");
  return d;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  std::int64_t i = 0;
  if (!parse_int(get(key), i)) bad(key, get(key), "not an integer");
  return i;
}

std::uint64_t RunConfig::get_uint(const std::string& key) const {
  const auto i = get_int(key);
  if (i < 0) bad(key, get(key), "must be >= 0");
  return static_cast<std::uint64_t>(i);
}

bool RunConfig::get_bool(const std::string& key) const {
  const auto& v = get(key);
  return v == "true" || v == "1";
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    double d = 0.0;
    if (!parse_double(trim(item), d)) bad(key, get(key), "not a list of numbers");
    out.push_back(d);
  }
  return out;
}

std::string RunConfig::resolved_text(const std::vector<std::string>& notes) const {
  std::ostringstream os;
  os << "# resolved configuration\n";
  for (const auto& note : notes) os << "# " << note << "\n";
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace ridgeboost
