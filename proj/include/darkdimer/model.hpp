#pragma once

// Physical model of a 1D emitter array coupled to a broadband squeezed
// vacuum in a waveguide. Units: hbar = 1, rates in gamma, positions as the
// dimensionless phases k0*z.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darkdimer/opalg.hpp"

namespace darkdimer {

/// Squeezed reservoir: photons per mode N, pair correlation M = |M| e^{i phi}.
///
/// At minimal uncertainty (|M|^2 = N(N+1)) the bath also carries the
/// squeezing amplitudes mu, nu with |mu|^2 = N+1, |nu|^2 = N and
/// nu mu* = -M. The gauge is mu real positive.
class BathParams {
 public:
  double n_ph() const { return n_ph_; }
  double m_abs() const { return m_abs_; }
  double phi() const { return phi_; }
  Complex m_ph() const { return std::polar(m_abs_, phi_); }
  bool is_minimal() const { return minimal_; }

  /// Throw PreconditionError for a non-minimal bath.
  Complex mu() const;
  Complex nu() const;

  /// Lorentz parameter, 0.5*ln(|mu|/|nu|). Throws UndefinedValueError at N = 0
  /// and PreconditionError for a non-minimal bath.
  double eta() const;

  /// x = N / (N + 1), the thermal Boltzmann-like ratio.
  double thermal_ratio() const { return n_ph_ / (n_ph_ + 1.0); }

 private:
  friend BathParams make_bath(double, double, bool, std::optional<double>);
  double n_ph_ = 0.0;
  double m_abs_ = 0.0;
  double phi_ = 0.0;
  bool minimal_ = true;
};

/// n_ph >= 0. With `minimal` set and no override, |M| = sqrt(N(N+1)).
/// Without `minimal` and no override, |M| = 0 (thermal reservoir).
/// An override must satisfy 0 <= |M| <= sqrt(N(N+1)); the bath counts as
/// minimal when it sits on the bound.
BathParams make_bath(double n_ph, double phi = 0.0, bool minimal = true,
                     std::optional<double> m_abs_override = std::nullopt);

/// Equidistant chain centred on k0zc:
/// k0z[n] = k0zc + (n - (n_at+1)/2) * k0a for n = 1..n_at.
struct ArrayGeometry {
  int n_at = 0;
  double k0a = 0.0;
  double k0zc = 0.0;
  std::vector<double> k0z;
};

/// n_at >= 1, k0a >= 0. k0a = 0 places all atoms at the centre.
ArrayGeometry make_geometry(int n_at, double k0a, double k0zc);

enum class Direction { kRight = +1, kLeft = -1 };

inline double sign_of(Direction s) { return s == Direction::kRight ? 1.0 : -1.0; }

/// One dissipator term rate * L_op. The rate may be negative.
struct DissipatorChannel {
  std::string label;
  ComplexMatrix op;
  double rate = 0.0;
};

struct StandingOps {
  ComplexMatrix plus_r;   // S_+^(R)
  ComplexMatrix minus_r;  // S_-^(R)
  ComplexMatrix plus_i;   // S_+^(I)
  ComplexMatrix minus_i;  // S_-^(I)
};

struct ModelOperators {
  ArrayGeometry geometry;
  BathParams bath;
  double gamma = 1.0;
  ComplexMatrix hamiltonian;
  /// Four signed channels per direction, right-moving first, in the order
  /// (N+1) J_s, N J_s^dag, +|M|/2 J_{phi,s}, -|M|/2 J_{phi+pi,s}, each scaled
  /// by gamma/2.
  std::vector<DissipatorChannel> travelling;
  /// (J_x, J_y) with the common rate 4 gamma |mu nu|; present only for a
  /// minimal bath with N > 0.
  std::optional<std::array<DissipatorChannel, 2>> squeezed;
};

/// H = (gamma/2) sum_{n,m} sin(k0|z_n - z_m|) sigma_+^(n) sigma_-^(m).
ComplexMatrix hamiltonian_scatt(const ArrayGeometry& geo, double gamma);

/// J_s = sum_n exp(-i s k0 z_n) sigma_-^(n).
ComplexMatrix jump_travelling(const ArrayGeometry& geo, Direction s);

/// J_{theta,s} = exp(i theta/2) J_s + exp(-i theta/2) J_s^dag.
ComplexMatrix jump_quadrature(const ArrayGeometry& geo, Direction s, double theta);

StandingOps standing_ops(const ArrayGeometry& geo);

/// J_x = (mu S_-^(I) + nu* S_+^(I)) / |4 mu nu|^{1/2},
/// J_y = (mu S_-^(R) - nu* S_+^(R)) / |4 mu nu|^{1/2}.
/// Requires a minimal bath with N > 0.
/// nu enters conjugated so that the pair term matches the travelling
/// channels for any phase of M.
std::pair<ComplexMatrix, ComplexMatrix> squeezed_jumps(const ArrayGeometry& geo,
                                                       const BathParams& bath);

/// <A_theta(z_n) A_theta(z_m)> for the superposed counter-propagating fields.
double field_two_point(double k0z_n, double k0z_m, double theta, const BathParams& bath);

ModelOperators build_model(const ArrayGeometry& geo, const BathParams& bath, double gamma = 1.0);

}  // namespace darkdimer
