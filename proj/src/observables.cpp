#include "darkdimer/observables.hpp"

#include <algorithm>
#include <cmath>

#include "darkdimer/errors.hpp"

namespace darkdimer {
namespace {

ComplexMatrix collective_half_sum(const ComplexMatrix& op2, int n_at) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_at));
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n <= n_at; ++n) out += embed_single_site(op2, n, n_at);
  return 0.5 * out;
}

int atoms_for_dim(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) throw ArgumentError("state dimension is not a power of two");
  return n;
}

void require_dim(std::size_t dim, const ArrayGeometry& geo, const char* where) {
  if (dim != hilbert_dim(geo.n_at)) {
    throw ArgumentError(std::string(where) + ": state dimension does not match n_at");
  }
}

ComplexMatrix projector(const PureState& psi) {
  return psi.amplitudes() * psi.amplitudes().adjoint();
}

}  // namespace

CollectiveSpin::CollectiveSpin(int n_at)
    : n_at_(n_at),
      sx_(collective_half_sum(sigma_x(), n_at)),
      sy_(collective_half_sum(sigma_y(), n_at)),
      sz_(collective_half_sum(sigma_z(), n_at)),
      sx2_(sx_ * sx_),
      sy2_(sy_ * sy_),
      sz2_(sz_ * sz_) {}

PolarizationMoments CollectiveSpin::moments(const ComplexMatrix& rho) const {
  if (rho.rows() != sx_.rows()) throw ArgumentError("CollectiveSpin::moments: dimension mismatch");
  PolarizationMoments pm;
  pm.mean_x = trace_of_product(rho, sx_).real();
  pm.mean_y = trace_of_product(rho, sy_).real();
  pm.mean_z = trace_of_product(rho, sz_).real();
  pm.var_x = trace_of_product(rho, sx2_).real() - pm.mean_x * pm.mean_x;
  pm.var_y = trace_of_product(rho, sy2_).real() - pm.mean_y * pm.mean_y;
  pm.var_z = trace_of_product(rho, sz2_).real() - pm.mean_z * pm.mean_z;
  return pm;
}

PolarizationMoments polarization_moments(const DensityMatrix& rho, const ArrayGeometry& geo) {
  require_dim(rho.dim(), geo, "polarization_moments");
  return CollectiveSpin(geo.n_at).moments(rho.matrix());
}

PolarizationMoments polarization_moments(const PureState& psi, const ArrayGeometry& geo) {
  require_dim(psi.dim(), geo, "polarization_moments");
  return CollectiveSpin(geo.n_at).moments(projector(psi));
}

double purity(const ComplexMatrix& rho) {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
  return rho.squaredNorm();
}

double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

CorrelationMatrix pair_correlations(const ComplexMatrix& rho, int n_at) {
  if (static_cast<std::size_t>(rho.rows()) != hilbert_dim(n_at)) {
    throw ArgumentError("pair_correlations: dimension mismatch");
  }
  const std::size_t dim = hilbert_dim(n_at);
  CorrelationMatrix c{n_at, std::vector<double>(static_cast<std::size_t>(n_at * n_at), 0.0)};
  for (int n = 0; n < n_at; ++n) {
    for (int m = n; m < n_at; ++m) {
      double value = 0.25;
      if (n != m) {
        // sigma_x^(n) sigma_x^(m) flips both bits: Tr = sum_i rho(i ^ mask, i).
        const std::size_t mask = (std::size_t{1} << (n_at - 1 - n)) | (std::size_t{1} << (n_at - 1 - m));
        Complex acc{};
        for (std::size_t i = 0; i < dim; ++i) {
          acc += rho(static_cast<Eigen::Index>(i ^ mask), static_cast<Eigen::Index>(i));
        }
        value = 0.25 * acc.real();
      }
      c.entries[static_cast<std::size_t>(n * n_at + m)] = value;
      c.entries[static_cast<std::size_t>(m * n_at + n)] = value;
    }
  }
  return c;
}

CorrelationMatrix pair_correlations(const DensityMatrix& rho, const ArrayGeometry& geo) {
  require_dim(rho.dim(), geo, "pair_correlations");
  return pair_correlations(rho.matrix(), geo.n_at);
}

CorrelationMatrix pair_correlations(const PureState& psi, const ArrayGeometry& geo) {
  require_dim(psi.dim(), geo, "pair_correlations");
  return pair_correlations(projector(psi), geo.n_at);
}

std::vector<double> excitation_populations(const ComplexMatrix& rho) {
  const int n_at = atoms_for_dim(static_cast<std::size_t>(rho.rows()));
  std::vector<double> p(static_cast<std::size_t>(n_at + 1), 0.0);
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    p[static_cast<std::size_t>(excitation_count(static_cast<std::size_t>(i)))] += rho(i, i).real();
  }
  return p;
}

std::vector<double> excitation_populations(const DensityMatrix& rho) {
  return excitation_populations(rho.matrix());
}

std::vector<double> excitation_populations(const PureState& psi) {
  const int n_at = atoms_for_dim(psi.dim());
  std::vector<double> p(static_cast<std::size_t>(n_at + 1), 0.0);
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    p[static_cast<std::size_t>(excitation_count(static_cast<std::size_t>(i)))] +=
        std::norm(psi.amplitudes()(i));
  }
  return p;
}

double dark_condition(const ArrayGeometry& geo, const BathParams& bath) {
  const auto [jx, jy] = squeezed_jumps(geo, bath);
  const ComplexMatrix k = jx.adjoint() * jx + jy.adjoint() * jy;
  return hermitian_eigenvalues(k)(0);
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw ArgumentError("fidelity: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const PureState& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("fidelity: dimension mismatch");
  return a.amplitudes().dot(b.matrix() * a.amplitudes()).real();
}

double fidelity(const DensityMatrix& a, const PureState& b) { return fidelity(b, a); }

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ArgumentError("fidelity: dimension mismatch");
  return trace_of_product(a.matrix(), b.matrix()).real();
}

}  // namespace darkdimer
