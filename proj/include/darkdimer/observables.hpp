#pragma once

#include <vector>

#include "darkdimer/model.hpp"
#include "darkdimer/opalg.hpp"

namespace darkdimer {

/// Means and variances of the collective polarizations S_j = 1/2 sum_n sigma_j^(n).
/// var_j is <S_j^2> - <S_j>^2.
struct PolarizationMoments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double mean_z = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double var_z = 0.0;
};

/// C[n][m] = 1/4 <sigma_x^(n) sigma_x^(m)>, stored row-major, 0-based indices.
struct CorrelationMatrix {
  int n_at = 0;
  std::vector<double> entries;

  double at(int n, int m) const {
    return entries[static_cast<std::size_t>(n) * static_cast<std::size_t>(n_at) +
                   static_cast<std::size_t>(m)];
  }
};

/// Collective spin operators for a fixed atom number, built once and reused
/// when observables are sampled along a trajectory.
class CollectiveSpin {
 public:
  explicit CollectiveSpin(int n_at);

  int n_at() const { return n_at_; }
  PolarizationMoments moments(const ComplexMatrix& rho) const;

  const ComplexMatrix& sx() const { return sx_; }
  const ComplexMatrix& sy() const { return sy_; }
  const ComplexMatrix& sz() const { return sz_; }

 private:
  int n_at_;
  ComplexMatrix sx_, sy_, sz_;
  ComplexMatrix sx2_, sy2_, sz2_;
};

PolarizationMoments polarization_moments(const DensityMatrix& rho, const ArrayGeometry& geo);
PolarizationMoments polarization_moments(const PureState& psi, const ArrayGeometry& geo);

/// Tr[rho^2].
double purity(const ComplexMatrix& rho);
double purity(const DensityMatrix& rho);

CorrelationMatrix pair_correlations(const ComplexMatrix& rho, int n_at);
CorrelationMatrix pair_correlations(const DensityMatrix& rho, const ArrayGeometry& geo);
CorrelationMatrix pair_correlations(const PureState& psi, const ArrayGeometry& geo);

/// P(n_e) for n_e = 0..n_at: diagonal weight on basis states with n_e
/// excited atoms.
std::vector<double> excitation_populations(const ComplexMatrix& rho);
std::vector<double> excitation_populations(const DensityMatrix& rho);
std::vector<double> excitation_populations(const PureState& psi);

/// Smallest eigenvalue of J_x^dag J_x + J_y^dag J_y; <= 1e-10 iff some state
/// is annihilated by both squeezed jumps. Needs a minimal bath with N > 0.
double dark_condition(const ArrayGeometry& geo, const BathParams& bath);

/// Overlap fidelity: |<a|b>|^2 for two pure states, <psi|rho|psi> for pure
/// vs mixed, Tr[rho sigma] for two mixed states.
double fidelity(const PureState& a, const PureState& b);
double fidelity(const PureState& a, const DensityMatrix& b);
double fidelity(const DensityMatrix& a, const PureState& b);
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace darkdimer
