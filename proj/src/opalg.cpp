#include "darkdimer/opalg.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <string>

#include "darkdimer/errors.hpp"

namespace darkdimer {

std::size_t hilbert_dim(int n_at) {
  if (n_at < 0 || n_at > 12) {
    throw ArgumentError("hilbert_dim: n_at must be in [0, 12], got " + std::to_string(n_at));
  }
  return std::size_t{1} << n_at;
}

int excitation_count(std::size_t index) { return std::popcount(index); }

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

// Local basis order is (|g>, |e>) so that bit value 1 = excited.
ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix sigma_x() { return sigma_plus() + sigma_minus(); }

ComplexMatrix sigma_y() { return -kI * (sigma_plus() - sigma_minus()); }

ComplexMatrix sigma_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  ComplexMatrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i) {
    for (Eigen::Index j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed_single_site(const ComplexMatrix& op2, int site, int n_at) {
  if (op2.rows() != 2 || op2.cols() != 2) {
    throw ArgumentError("embed_single_site: operator must be 2x2");
  }
  if (n_at < 1 || site < 1 || site > n_at) {
    std::ostringstream msg;
    msg << "embed_single_site: site " << site << " out of range [1, " << n_at << "]";
    throw ArgumentError(msg.str());
  }
  const std::size_t left = hilbert_dim(site - 1);
  const std::size_t right = hilbert_dim(n_at - site);
  return kron(kron(identity(left), op2), identity(right));
}

ComplexVector basis_vector(const std::vector<bool>& excited) {
  const int n = static_cast<int>(excited.size());
  std::size_t index = 0;
  for (int k = 0; k < n; ++k) {
    if (excited[static_cast<std::size_t>(k)]) index |= std::size_t{1} << (n - 1 - k);
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(hilbert_dim(n)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tolerance;
}

bool is_unitary(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - identity(static_cast<std::size_t>(m.rows()))).cwiseAbs().maxCoeff() <=
         tolerance;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("hermitian_eigenvalues: matrix is not square");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw ArgumentError("trace_of_product: dimension mismatch");
  }
  return (a.array() * b.transpose().array()).sum();
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol::kNorm) {
    std::ostringstream msg;
    msg << "PureState: norm " << norm << " differs from 1";
    throw InvariantError(msg.str());
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw InvariantError("PureState::normalized: zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

StateHygiene check_state(const ComplexMatrix& rho) {
  StateHygiene h;
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    h.hermiticity_defect = INFINITY;
    h.trace_defect = INFINITY;
    h.min_eigenvalue = -INFINITY;
    return h;
  }
  h.hermiticity_defect = hermiticity_defect(rho);
  h.trace_defect = std::abs(rho.trace() - 1.0);
  h.min_eigenvalue = hermitian_eigenvalues(rho)(0);
  return h;
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
  const StateHygiene h = check_state(entries_);
  if (!h.ok()) {
    std::ostringstream msg;
    msg << "DensityMatrix: invariant violated (hermiticity " << h.hermiticity_defect
        << ", trace " << h.trace_defect << ", min eigenvalue " << h.min_eigenvalue << ")";
    throw InvariantError(msg.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const ComplexVector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint(), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw ArgumentError("maximally_mixed: dim must be positive");
  return DensityMatrix(identity(dim) / static_cast<double>(dim), Unchecked{});
}

Complex expectation(const DensityMatrix& rho, const ComplexMatrix& obs) {
  if (obs.rows() != obs.cols() || static_cast<std::size_t>(obs.rows()) != rho.dim()) {
    throw ArgumentError("expectation: dimension mismatch");
  }
  return trace_of_product(rho.matrix(), obs);
}

Complex expectation(const PureState& psi, const ComplexMatrix& obs) {
  if (obs.rows() != obs.cols() || static_cast<std::size_t>(obs.rows()) != psi.dim()) {
    throw ArgumentError("expectation: dimension mismatch");
  }
  return psi.amplitudes().dot(obs * psi.amplitudes());
}

}  // namespace darkdimer
