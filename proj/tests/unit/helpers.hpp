#pragma once

#include <random>

#include "ridgeboost/linalg.hpp"

namespace testing {

using ridgeboost::Matrix;
using ridgeboost::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0);
}

/// G^T G + shift I for a random rows x n matrix G.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rows, double shift) {
  const Matrix g = random_matrix(rng, rows, n);
  return g.transpose() * g + shift * Matrix::Identity(n, n);
}

inline double rel_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace testing
