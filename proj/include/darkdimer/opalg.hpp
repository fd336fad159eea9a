#pragma once

// Dense operator algebra on the 2^N Hilbert space of N two-level atoms.
//
// Basis convention: a computational basis index is read as an N-bit word
// whose most significant bit belongs to atom 1; bit value 1 means |e>.
// Site indices in the public API are 1-based to match atom labels.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace darkdimer {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kNorm = 1e-12;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPositivity = 1e-9;
}  // namespace tol

/// Hilbert space dimension 2^n_at.
std::size_t hilbert_dim(int n_at);

/// Number of excited atoms in basis state `index`.
int excitation_count(std::size_t index);

ComplexMatrix identity(std::size_t dim);
ComplexMatrix sigma_minus();  // |g><e|
ComplexMatrix sigma_plus();   // |e><g|
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();      // |e><e| - |g><g|

/// Kronecker product; entry (i*db + k, j*db + l) = a(i,j) * b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I (x) ... (x) op2 (x) ... (x) I with op2 on `site` (1-based, site 1 is the
/// leftmost / most significant factor). Throws ArgumentError on a bad site
/// or a non-2x2 operator.
ComplexMatrix embed_single_site(const ComplexMatrix& op2, int site, int n_at);

/// Computational basis vector for the given excitation pattern. `excited[k]`
/// refers to atom k+1.
ComplexVector basis_vector(const std::vector<bool>& excited);

bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::kHermitian);
bool is_unitary(const ComplexMatrix& m, double tolerance = tol::kHermitian);

/// Largest entrywise modulus of m - m^dagger.
double hermiticity_defect(const ComplexMatrix& m);

/// Ascending eigenvalues of the Hermitian part of m.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// Tr[a * b] in O(d^2) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Normalized state vector. Construction checks the unit norm.
class PureState {
 public:
  /// Throws InvariantError unless |amplitudes| = 1 within tol::kNorm.
  explicit PureState(ComplexVector amplitudes);

  /// Normalizes first; throws InvariantError on a zero vector.
  static PureState normalized(ComplexVector amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), trace (1e-10) and the smallest
  /// eigenvalue (>= -1e-9); throws InvariantError otherwise.
  explicit DensityMatrix(ComplexMatrix entries);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix entries, Unchecked) : entries_(std::move(entries)) {}

  ComplexMatrix entries_;
};

/// Result of checking the density-matrix invariants on a raw matrix.
struct StateHygiene {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const {
    return hermiticity_defect <= tol::kHermitian && trace_defect <= tol::kTrace &&
           min_eigenvalue >= -tol::kPositivity;
  }
};

StateHygiene check_state(const ComplexMatrix& rho);

Complex expectation(const DensityMatrix& rho, const ComplexMatrix& obs);
Complex expectation(const PureState& psi, const ComplexMatrix& obs);

}  // namespace darkdimer
