#include "darkdimer/model.hpp"

#include <cmath>
#include <sstream>

#include "darkdimer/errors.hpp"

namespace darkdimer {
namespace {

// Sum_n coeff[n] * op2^(n).
ComplexMatrix collective(const ComplexMatrix& op2, const std::vector<Complex>& coeff) {
  const int n_at = static_cast<int>(coeff.size());
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_at));
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < n_at; ++n) {
    if (coeff[static_cast<std::size_t>(n)] == Complex{}) continue;
    out += coeff[static_cast<std::size_t>(n)] * embed_single_site(op2, n + 1, n_at);
  }
  return out;
}

}  // namespace

Complex BathParams::mu() const {
  if (!minimal_) throw PreconditionError("BathParams::mu: defined only at minimal uncertainty");
  return {std::sqrt(n_ph_ + 1.0), 0.0};
}

Complex BathParams::nu() const {
  // nu mu* = -M with mu real.
  return -m_ph() / std::conj(mu());
}

double BathParams::eta() const {
  if (!minimal_) throw PreconditionError("BathParams::eta: defined only at minimal uncertainty");
  if (n_ph_ == 0.0) throw UndefinedValueError("BathParams::eta: undefined for n_ph = 0");
  return 0.5 * std::log(std::abs(mu()) / std::abs(nu()));
}

BathParams make_bath(double n_ph, double phi, bool minimal, std::optional<double> m_abs_override) {
  if (!(n_ph >= 0.0) || !std::isfinite(n_ph)) {
    std::ostringstream msg;
    msg << "make_bath: n_ph must be >= 0, got " << n_ph;
    throw ArgumentError(msg.str());
  }
  if (!std::isfinite(phi)) throw ArgumentError("make_bath: phi must be finite");
  const double bound = std::sqrt(n_ph * (n_ph + 1.0));
  BathParams bath;
  bath.n_ph_ = n_ph;
  bath.phi_ = phi;
  if (m_abs_override) {
    const double m = *m_abs_override;
    if (!(m >= 0.0) || m > bound * (1.0 + 1e-12) + 1e-15) {
      std::ostringstream msg;
      msg << "make_bath: |M| = " << m << " outside [0, sqrt(N(N+1)) = " << bound << "]";
      throw ArgumentError(msg.str());
    }
    bath.m_abs_ = std::min(m, bound);
    bath.minimal_ = std::abs(bath.m_abs_ - bound) <= 1e-12 * std::max(1.0, bound);
  } else if (minimal) {
    bath.m_abs_ = bound;
    bath.minimal_ = true;
  } else {
    bath.m_abs_ = 0.0;
    bath.minimal_ = n_ph == 0.0;
  }
  return bath;
}

ArrayGeometry make_geometry(int n_at, double k0a, double k0zc) {
  if (n_at < 1) {
    throw ArgumentError("make_geometry: n_at must be >= 1, got " + std::to_string(n_at));
  }
  if (!(k0a >= 0.0) || !std::isfinite(k0a) || !std::isfinite(k0zc)) {
    throw ArgumentError("make_geometry: k0a must be finite and >= 0, k0zc finite");
  }
  ArrayGeometry geo{n_at, k0a, k0zc, {}};
  geo.k0z.reserve(static_cast<std::size_t>(n_at));
  const double mid = 0.5 * (n_at + 1);
  for (int n = 1; n <= n_at; ++n) geo.k0z.push_back(k0zc + (n - mid) * k0a);
  return geo;
}

ComplexMatrix hamiltonian_scatt(const ArrayGeometry& geo, double gamma) {
  if (!(gamma > 0.0)) throw ArgumentError("hamiltonian_scatt: gamma must be > 0");
  const int n_at = geo.n_at;
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_at));
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> lower;
  lower.reserve(static_cast<std::size_t>(n_at));
  for (int n = 1; n <= n_at; ++n) lower.push_back(embed_single_site(sigma_minus(), n, n_at));
  for (int n = 0; n < n_at; ++n) {
    for (int m = 0; m < n_at; ++m) {
      if (n == m) continue;
      const double s = std::sin(std::abs(geo.k0z[n] - geo.k0z[m]));
      // Separations at multiples of pi leave rounding residue in sin.
      if (std::abs(s) < 1e-12) continue;
      h += (0.5 * gamma * s) * lower[n].adjoint() * lower[m];
    }
  }
  return h;
}

ComplexMatrix jump_travelling(const ArrayGeometry& geo, Direction s) {
  std::vector<Complex> coeff;
  for (double z : geo.k0z) coeff.push_back(std::exp(-kI * sign_of(s) * z));
  return collective(sigma_minus(), coeff);
}

ComplexMatrix jump_quadrature(const ArrayGeometry& geo, Direction s, double theta) {
  const ComplexMatrix j = jump_travelling(geo, s);
  return std::exp(kI * (0.5 * theta)) * j + std::exp(-kI * (0.5 * theta)) * j.adjoint();
}

StandingOps standing_ops(const ArrayGeometry& geo) {
  std::vector<Complex> c, s;
  for (double z : geo.k0z) {
    c.emplace_back(std::cos(z));
    s.emplace_back(std::sin(z));
  }
  StandingOps ops;
  ops.minus_r = collective(sigma_minus(), c);
  ops.minus_i = collective(sigma_minus(), s);
  ops.plus_r = ops.minus_r.adjoint();
  ops.plus_i = ops.minus_i.adjoint();
  return ops;
}

std::pair<ComplexMatrix, ComplexMatrix> squeezed_jumps(const ArrayGeometry& geo,
                                                       const BathParams& bath) {
  if (!bath.is_minimal()) {
    throw PreconditionError("squeezed_jumps: bath must be at minimal uncertainty");
  }
  if (bath.n_ph() == 0.0) {
    throw UndefinedValueError("squeezed_jumps: normalization |4 mu nu| vanishes at n_ph = 0");
  }
  // With the travelling-channel convention for J_phi the pair term carries
  // M, which the factorized form reproduces with nu* (nu itself gives M*).
  // The two coincide for real M.
  const Complex mu = bath.mu();
  const Complex nu = std::conj(bath.nu());
  const double norm = std::sqrt(std::abs(4.0 * mu * nu));
  const StandingOps ops = standing_ops(geo);
  ComplexMatrix jx = (mu * ops.minus_i + nu * ops.plus_i) / norm;
  ComplexMatrix jy = (mu * ops.minus_r - nu * ops.plus_r) / norm;
  return {std::move(jx), std::move(jy)};
}

double field_two_point(double k0z_n, double k0z_m, double theta, const BathParams& bath) {
  return 0.5 * bath.m_abs() * std::cos(theta - bath.phi()) * std::cos(k0z_n + k0z_m) +
         0.5 * (bath.n_ph() + 0.5);
}

ModelOperators build_model(const ArrayGeometry& geo, const BathParams& bath, double gamma) {
  ModelOperators model{geo, bath, gamma, hamiltonian_scatt(geo, gamma), {}, std::nullopt};
  const double n = bath.n_ph();
  const double m = bath.m_abs();
  const double phi = bath.phi();
  for (Direction s : {Direction::kRight, Direction::kLeft}) {
    const std::string tag = s == Direction::kRight ? "+" : "-";
    const ComplexMatrix j = jump_travelling(geo, s);
    model.travelling.push_back({"J" + tag, j, 0.5 * gamma * (n + 1.0)});
    model.travelling.push_back({"J" + tag + "^dag", j.adjoint(), 0.5 * gamma * n});
    model.travelling.push_back({"J_phi" + tag, jump_quadrature(geo, s, phi), 0.25 * gamma * m});
    model.travelling.push_back(
        {"J_phi+pi" + tag, jump_quadrature(geo, s, phi + M_PI), -0.25 * gamma * m});
  }
  if (bath.is_minimal() && n > 0.0) {
    auto [jx, jy] = squeezed_jumps(geo, bath);
    const double rate = 4.0 * gamma * std::abs(bath.mu() * bath.nu());
    model.squeezed = std::array<DissipatorChannel, 2>{
        DissipatorChannel{"Jx", std::move(jx), rate}, DissipatorChannel{"Jy", std::move(jy), rate}};
  }
  return model;
}

}  // namespace darkdimer
