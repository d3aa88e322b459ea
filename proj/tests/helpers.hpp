#pragma once

#include "qcf/operator_core.hpp"
#include "qcf/spin_star.hpp"

#include <random>
#include <vector>

namespace testing {

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
  return v;
}

inline qcf::LayerConfig layers(std::initializer_list<qcf::Layer> l) { return qcf::LayerConfig{std::vector<qcf::Layer>(l)}; }

template <typename Derived>
double maxAbs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline qcf::Operator randomMatrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  qcf::Operator m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = qcf::complex(g(rng), g(rng));
  return m;
}

inline qcf::Operator randomHermitian(std::mt19937_64& rng, Eigen::Index n) {
  const qcf::Operator m = randomMatrix(rng, n);
  return (m + m.adjoint()) / 2.0;
}

/// Random density matrix of dimension n (Ginibre).
inline qcf::Operator randomState(std::mt19937_64& rng, Eigen::Index n) {
  const qcf::Operator m = randomMatrix(rng, n);
  const qcf::Operator rho = m * m.adjoint();
  return rho / rho.trace();
}

}  // namespace testing
