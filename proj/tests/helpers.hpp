#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "nnc/types.hpp"

namespace nnc_test {

// Deterministic random orthogonal matrix (QR of a Gaussian sample with the
// sign ambiguity fixed).
inline nnc::Matrix random_orthogonal(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  nnc::Matrix a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<nnc::Matrix> qr(a);
  nnc::Matrix q = qr.householderQ();
  const nnc::Matrix r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

inline nnc::Vector random_vector(int m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  nnc::Vector v(m);
  for (int i = 0; i < m; ++i) v(i) = gauss(rng);
  return v;
}

inline nnc::Vector vec2(double a, double b) {
  nnc::Vector v(2);
  v << a, b;
  return v;
}

inline nnc::Vector vec3(double a, double b, double c) {
  nnc::Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace nnc_test
