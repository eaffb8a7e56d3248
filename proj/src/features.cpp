#include "ridgeboost/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "ridgeboost/error.hpp"

namespace ridgeboost {

namespace {

void require_cols(const Matrix& x, Eigen::Index expected, const char* what) {
  if (x.cols() != expected) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected " +
                                                  std::to_string(expected) + " columns, got " +
                                                  std::to_string(x.cols()));
  }
}

// All exponent vectors with total degree exactly `total`, first coordinate
// varying slowest (x1^2, x1 x2, x2^2, ...).
void exponents_of_degree(int dim, int total, std::vector<int>& current, int pos,
                         std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    current[pos] = total;
    out.push_back(current);
    return;
  }
  for (int e = total; e >= 0; --e) {
    current[pos] = e;
    exponents_of_degree(dim, total - e, current, pos + 1, out);
  }
  current[pos] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows() < 1) throw Error(ErrorKind::EmptyData, "Standardizer::fit: no rows");
  Standardizer s;
  s.center = x.colwise().mean().transpose();
  s.scale = Vector::Ones(x.cols());
  if (x.rows() > 1) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double var = (x.col(j).array() - s.center(j)).square().sum() /
                         static_cast<double>(x.rows() - 1);
      if (var > 0.0) s.scale(j) = std::sqrt(var);
    }
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (is_identity()) return x;
  require_cols(x, center.size(), "Standardizer::apply");
  return ((x.rowwise() - center.transpose()).array().rowwise() / scale.transpose().array())
      .matrix();
}

FeatureMap FeatureMap::identity(Eigen::Index input_dim) {
  if (input_dim < 1) throw Error(ErrorKind::InvalidParameter, "identity map needs input_dim >= 1");
  FeatureMap m;
  m.kind_ = FeatureKind::Identity;
  m.input_dim_ = input_dim;
  return m;
}

FeatureMap FeatureMap::polynomial(Eigen::Index input_dim, int degree, bool include_bias) {
  if (input_dim < 1 || degree < 1) {
    throw Error(ErrorKind::InvalidParameter, "polynomial map needs input_dim >= 1, degree >= 1");
  }
  FeatureMap m;
  m.kind_ = FeatureKind::Polynomial;
  m.input_dim_ = input_dim;
  m.degree_ = degree;
  m.include_bias_ = include_bias;
  const int dim = static_cast<int>(input_dim);
  std::vector<int> current(dim, 0);
  for (int total = include_bias ? 0 : 1; total <= degree; ++total) {
    exponents_of_degree(dim, total, current, 0, m.exponents_);
  }
  m.coefficients_.assign(m.exponents_.size(), 1.0);
  return m;
}

FeatureMap FeatureMap::polynomial_kernel(Eigen::Index input_dim, int degree, double offset) {
  if (!(offset >= 0.0)) throw Error(ErrorKind::InvalidParameter, "polynomial offset must be >= 0");
  FeatureMap m = polynomial(input_dim, degree, true);
  m.scaled_ = true;
  m.offset_ = offset;
  const double qf = factorial(degree);
  for (std::size_t t = 0; t < m.exponents_.size(); ++t) {
    const auto& a = m.exponents_[t];
    const int total = std::accumulate(a.begin(), a.end(), 0);
    double denom = factorial(degree - total);
    for (int e : a) denom *= factorial(e);
    m.coefficients_[t] = std::sqrt(qf / denom * std::pow(offset, degree - total));
  }
  return m;
}

Eigen::Index FeatureMap::output_dim() const {
  switch (kind_) {
    case FeatureKind::Identity: return input_dim_;
    case FeatureKind::Polynomial: return static_cast<Eigen::Index>(exponents_.size());
    case FeatureKind::Rff: return frequencies_.rows();
  }
  return 0;
}

FeatureMap FeatureMap::with_input_scaling(Standardizer scaling) const {
  if (!scaling.is_identity() && scaling.center.size() != input_dim_) {
    throw Error(ErrorKind::DimensionMismatch, "with_input_scaling: dimension mismatch");
  }
  FeatureMap m = *this;
  m.scaling_ = std::move(scaling);
  return m;
}

Matrix FeatureMap::apply(const Matrix& raw) const {
  require_cols(raw, input_dim_, "apply_feature_map");
  const Matrix x = scaling_.apply(raw);
  switch (kind_) {
    case FeatureKind::Identity:
      return x;
    case FeatureKind::Polynomial: {
      Matrix out(x.rows(), output_dim());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (std::size_t t = 0; t < exponents_.size(); ++t) {
          double v = coefficients_[t];
          const auto& a = exponents_[t];
          for (Eigen::Index j = 0; j < input_dim_; ++j) {
            for (int e = 0; e < a[j]; ++e) v *= x(i, j);
          }
          out(i, static_cast<Eigen::Index>(t)) = v;
        }
      }
      return out;
    }
    case FeatureKind::Rff: {
      const double amp = std::sqrt(2.0 / static_cast<double>(frequencies_.rows()));
      Matrix proj = x * frequencies_.transpose();
      proj.rowwise() += phases_.transpose();
      return (amp * proj.array().cos()).matrix();
    }
  }
  return {};
}

std::string FeatureMap::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case FeatureKind::Identity: os << "identity"; break;
    case FeatureKind::Polynomial:
      if (scaled_) {
        os << "polynomial_kernel(degree=" << degree_ << ",offset=" << offset_ << ")";
      } else {
        os << "polynomial(degree=" << degree_ << ",bias=" << (include_bias_ ? 1 : 0) << ")";
      }
      break;
    case FeatureKind::Rff:
      os << "rff(D=" << frequencies_.rows() << ",bandwidth=" << bandwidth_ << ",seed=" << seed_
         << ")";
      break;
  }
  return os.str();
}

FeatureMap sample_rff(double bandwidth, Eigen::Index input_dim, Eigen::Index num_features,
                      std::uint64_t seed) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorKind::InvalidParameter, "sample_rff: bandwidth must be > 0");
  }
  if (num_features < 1 || input_dim < 1) {
    throw Error(ErrorKind::InvalidParameter, "sample_rff: need D >= 1 and input_dim >= 1");
  }
  FeatureMap m;
  m.kind_ = FeatureKind::Rff;
  m.input_dim_ = input_dim;
  m.bandwidth_ = bandwidth;
  m.seed_ = seed;
  m.frequencies_.resize(num_features, input_dim);
  m.phases_.resize(num_features);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / bandwidth);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  for (Eigen::Index r = 0; r < num_features; ++r) {
    for (Eigen::Index c = 0; c < input_dim; ++c) m.frequencies_(r, c) = normal(rng);
    m.phases_(r) = uniform(rng);
  }
  return m;
}

Kernel Kernel::linear() {
  Kernel k;
  k.kind = KernelKind::Linear;
  return k;
}

Kernel Kernel::polynomial(int degree, double offset) {
  if (degree < 1 || !(offset >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "polynomial kernel needs degree >= 1, offset >= 0");
  }
  Kernel k;
  k.kind = KernelKind::Polynomial;
  k.degree = degree;
  k.offset = offset;
  return k;
}

Kernel Kernel::rbf(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorKind::InvalidParameter, "rbf bandwidth must be > 0");
  }
  Kernel k;
  k.kind = KernelKind::Rbf;
  k.bandwidth = bandwidth;
  return k;
}

Kernel Kernel::with_input_scaling(Standardizer s) const {
  Kernel k = *this;
  k.scaling = std::move(s);
  return k;
}

double Kernel::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                          const Eigen::Ref<const Eigen::RowVectorXd>& y) const {
  switch (kind) {
    case KernelKind::Linear: return x.dot(y);
    case KernelKind::Polynomial: return std::pow(x.dot(y) + offset, degree);
    case KernelKind::Rbf:
      return std::exp(-(x - y).squaredNorm() / (2.0 * bandwidth * bandwidth));
  }
  return 0.0;
}

std::string Kernel::describe() const {
  std::ostringstream os;
  switch (kind) {
    case KernelKind::Linear: os << "linear"; break;
    case KernelKind::Polynomial: os << "polynomial(degree=" << degree << ",offset=" << offset << ")"; break;
    case KernelKind::Rbf: os << "rbf(bandwidth=" << bandwidth << ")"; break;
  }
  return os.str();
}

Matrix gram(const Kernel& kernel, const Matrix& a_raw, const Matrix& b_raw) {
  if (a_raw.cols() != b_raw.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "gram: column counts differ (" +
                                                  std::to_string(a_raw.cols()) + " vs " +
                                                  std::to_string(b_raw.cols()) + ")");
  }
  const Matrix a = kernel.scaling.apply(a_raw);
  const Matrix b = kernel.scaling.apply(b_raw);
  if (kernel.kind == KernelKind::Linear) return a * b.transpose();
  if (kernel.kind == KernelKind::Polynomial) {
    Matrix g = a * b.transpose();
    g.array() += kernel.offset;
    return g.array().pow(kernel.degree).matrix();
  }
  // Pairwise differences rather than the norm expansion so that k(x, x) == 1 exactly.
  Matrix g(a.rows(), b.rows());
  const double inv = 1.0 / (2.0 * kernel.bandwidth * kernel.bandwidth);
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      g(i, j) = std::exp(-(a.row(i) - b.row(j)).squaredNorm() * inv);
    }
  }
  return g;
}

Matrix gram(const Kernel& kernel, const Matrix& a) {
  Matrix g = gram(kernel, a, a);
  // Exact symmetry for downstream factorizations.
  return 0.5 * (g + g.transpose());
}

double median_heuristic_bandwidth(const Matrix& x) {
  if (x.rows() < 2) {
    throw Error(ErrorKind::InvalidParameter, "median_heuristic_bandwidth: need at least 2 rows");
  }
  constexpr Eigen::Index kMaxRows = 500;
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  if (x.rows() > kMaxRows) {
    std::mt19937_64 rng(0);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(kMaxRows);
    std::sort(rows.begin(), rows.end());
  }
  std::vector<double> dists;
  dists.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      dists.push_back((x.row(rows[i]) - x.row(rows[j])).norm());
    }
  }
  const std::size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
  double median = dists[mid];
  if (dists.size() % 2 == 0) {
    const double lower =
        *std::max_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  if (!(median > 0.0)) {
    // Median can be zero with a minority of distinct rows; only all-identical is degenerate.
    const double largest = *std::max_element(dists.begin(), dists.end());
    if (!(largest > 0.0)) {
      throw Error(ErrorKind::DegenerateData, "median_heuristic_bandwidth: all rows identical");
    }
    median = largest;
  }
  return median;
}

std::optional<FeatureMap> exact_feature_map(const Kernel& kernel, Eigen::Index input_dim) {
  switch (kernel.kind) {
    case KernelKind::Linear:
      return FeatureMap::identity(input_dim).with_input_scaling(kernel.scaling);
    case KernelKind::Polynomial:
      return FeatureMap::polynomial_kernel(input_dim, kernel.degree, kernel.offset)
          .with_input_scaling(kernel.scaling);
    case KernelKind::Rbf:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace ridgeboost
