#pragma once

#include <random>

#include "darkdimer/opalg.hpp"

namespace testing {

using darkdimer::Complex;
using darkdimer::ComplexMatrix;

// Random Hermitian unit-trace matrix; not necessarily positive.
inline ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  ComplexMatrix h = a + a.adjoint();
  h += ComplexMatrix::Identity(dim, dim) * (1.0 - h.trace().real()) / static_cast<double>(dim);
  return h;
}

// Random density matrix A A^dag / Tr.
inline ComplexMatrix random_density(Eigen::Index dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  ComplexMatrix r = a * a.adjoint();
  return r / r.trace().real();
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
