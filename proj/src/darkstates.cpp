#include "darkdimer/darkstates.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "darkdimer/errors.hpp"

namespace darkdimer {
namespace {

constexpr double kGeomTol = 1e-9;
constexpr int kMaxMatchingAtoms = 8;

bool near_integer_multiple(double value, double period) {
  const double r = std::remainder(value, period);
  return std::abs(r) <= kGeomTol;
}

std::size_t bit_of(int atom, int n_at) { return std::size_t{1} << (n_at - atom); }

void check_pair(const ArrayGeometry& geo, const PairSpec& spec) {
  if (spec.n < 1 || spec.m > geo.n_at || spec.n >= spec.m) {
    std::ostringstream msg;
    msg << "pair (" << spec.n << ", " << spec.m << ") invalid for n_at = " << geo.n_at;
    throw ArgumentError(msg.str());
  }
  const double zn = geo.k0z[static_cast<std::size_t>(spec.n - 1)];
  const double zm = geo.k0z[static_cast<std::size_t>(spec.m - 1)];
  if (spec.kind == PairKind::kSym) {
    if (std::abs(std::sin(zm - zn)) > kGeomTol) {
      throw PreconditionError("sym pair requires sin k0(z_m - z_n) = 0");
    }
  } else if (std::abs(std::abs(std::cos(zn + zm)) - 1.0) > kGeomTol) {
    throw PreconditionError("squeezed pair requires cos k0(z_n + z_m) = +-1");
  }
}

// Amplitudes of a state that is a product of pair states, computed basis
// state by basis state.
ComplexVector product_amplitudes(const ArrayGeometry& geo,
                                 const std::vector<std::pair<PairSpec, std::array<Complex, 4>>>& pairs) {
  const int n_at = geo.n_at;
  const std::size_t dim = hilbert_dim(n_at);
  std::size_t paired_mask = 0;
  for (const auto& [spec, amp] : pairs) {
    const std::size_t bits = bit_of(spec.n, n_at) | bit_of(spec.m, n_at);
    if (paired_mask & bits) throw ArgumentError("paired_product: pairs overlap");
    paired_mask |= bits;
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & ~paired_mask) continue;  // unpaired atoms stay in |g>
    Complex a{1.0, 0.0};
    for (const auto& [spec, amp] : pairs) {
      const int local = ((i & bit_of(spec.n, n_at)) ? 2 : 0) + ((i & bit_of(spec.m, n_at)) ? 1 : 0);
      a *= amp[static_cast<std::size_t>(local)];
      if (a == Complex{}) break;
    }
    v(static_cast<Eigen::Index>(i)) = a;
  }
  return v;
}

void matchings_rec(std::vector<int>& free_atoms, std::vector<std::pair<int, int>>& current,
                   std::vector<std::vector<std::pair<int, int>>>& out) {
  if (free_atoms.empty()) {
    out.push_back(current);
    return;
  }
  const int first = free_atoms.front();
  for (std::size_t k = 1; k < free_atoms.size(); ++k) {
    const int partner = free_atoms[k];
    std::vector<int> rest;
    for (std::size_t j = 1; j < free_atoms.size(); ++j) {
      if (j != k) rest.push_back(free_atoms[j]);
    }
    current.emplace_back(first, partner);
    matchings_rec(rest, current, out);
    current.pop_back();
  }
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(factorial(n) / (factorial(k) * factorial(n - k)));
}

}  // namespace

std::array<Complex, 4> pair_amplitudes(const ArrayGeometry& geo, const BathParams& bath,
                                       const PairSpec& spec) {
  check_pair(geo, spec);
  const double zn = geo.k0z[static_cast<std::size_t>(spec.n - 1)];
  const double zm = geo.k0z[static_cast<std::size_t>(spec.m - 1)];
  if (spec.kind == PairKind::kSym) {
    const double r = 1.0 / std::sqrt(2.0);
    return {Complex{}, Complex{r, 0.0}, -std::exp(kI * (zm - zn)) * r, Complex{}};
  }
  // Same phase convention as squeezed_jumps.
  const Complex mu = bath.mu();
  const Complex nu = std::conj(bath.nu());
  const double norm = std::sqrt(std::norm(mu) + std::norm(nu));
  return {mu / norm, Complex{}, Complex{}, std::exp(kI * (zn + zm)) * nu / norm};
}

PureState pair_state(const ArrayGeometry& geo, const BathParams& bath, const PairSpec& spec) {
  return paired_product(geo, bath, {spec});
}

PureState paired_product(const ArrayGeometry& geo, const BathParams& bath,
                         const std::vector<PairSpec>& pairs) {
  std::vector<std::pair<PairSpec, std::array<Complex, 4>>> resolved;
  resolved.reserve(pairs.size());
  for (const PairSpec& p : pairs) resolved.emplace_back(p, pair_amplitudes(geo, bath, p));
  return PureState::normalized(product_amplitudes(geo, resolved));
}

PureState dimer_chain(const ArrayGeometry& geo, const BathParams& bath) {
  if (geo.n_at % 2 != 0) {
    throw PreconditionError("dimer_chain: unsupported configuration, n_at must be even");
  }
  std::vector<PairSpec> pairs;
  for (int n = 1; n < geo.n_at; n += 2) pairs.push_back({n, n + 1, PairKind::kSqueezed});
  return paired_product(geo, bath, pairs);
}

double stability_residual(const PureState& psi, const ModelOperators& model) {
  if (static_cast<Eigen::Index>(psi.dim()) != model.hamiltonian.rows()) {
    throw ArgumentError("stability_residual: dimension mismatch");
  }
  const ComplexVector& v = psi.amplitudes();
  const ComplexVector hv = model.hamiltonian * v;
  return (hv - v.dot(hv) * v).norm();
}

std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int n_at) {
  if (n_at < 2 || n_at % 2 != 0 || n_at > kMaxMatchingAtoms) {
    throw ArgumentError("perfect_matchings: n_at must be even and in [2, 8]");
  }
  std::vector<int> atoms(static_cast<std::size_t>(n_at));
  std::iota(atoms.begin(), atoms.end(), 1);
  std::vector<std::pair<int, int>> current;
  std::vector<std::vector<std::pair<int, int>>> out;
  matchings_rec(atoms, current, out);
  return out;
}

PureState melted_dark(const ArrayGeometry& geo, const BathParams& bath, int l) {
  if (geo.n_at % 2 != 0 || geo.n_at > kMaxMatchingAtoms) {
    throw PreconditionError("melted_dark: n_at must be even and <= 8");
  }
  if (std::abs(std::sin(geo.k0a)) > kGeomTol) {
    throw PreconditionError("melted_dark: requires sin k0a = 0");
  }
  const int n_pairs = geo.n_at / 2;
  if (l < 0 || l > n_pairs) {
    throw ArgumentError("melted_dark: l must lie in [0, n_at/2]");
  }
  ComplexVector sum = ComplexVector::Zero(static_cast<Eigen::Index>(hilbert_dim(geo.n_at)));
  for (const auto& matching : perfect_matchings(geo.n_at)) {
    // Every subset of `l` pairs is squeezed, the rest sym.
    for (unsigned mask = 0; mask < (1u << n_pairs); ++mask) {
      if (std::popcount(mask) != l) continue;
      std::vector<std::pair<PairSpec, std::array<Complex, 4>>> resolved;
      for (int k = 0; k < n_pairs; ++k) {
        const auto [n, m] = matching[static_cast<std::size_t>(k)];
        const PairSpec spec{n, m, (mask >> k) & 1u ? PairKind::kSqueezed : PairKind::kSym};
        resolved.emplace_back(spec, pair_amplitudes(geo, bath, spec));
      }
      sum += product_amplitudes(geo, resolved);
    }
  }
  if (sum.norm() < 1e-12) {
    throw PreconditionError("melted_dark: matching sum vanishes for this sector");
  }
  return PureState::normalized(std::move(sum));
}

double collective_amplitude(int n_at, int n_e) {
  if (n_at < 0 || n_at % 2 != 0) throw ArgumentError("collective_amplitude: n_at must be even");
  if (n_e < 0 || n_e > n_at) throw ArgumentError("collective_amplitude: n_e out of range");
  if (n_e % 2 != 0) return 0.0;
  const int n_g = n_at - n_e;
  return std::sqrt(factorial(n_g) * factorial(n_e)) /
         (std::pow(2.0, n_at / 2) * factorial(n_g / 2) * factorial(n_e / 2));
}

double associated_legendre(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l) throw ArgumentError("associated_legendre: need 0 <= m <= l");
  // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
  double pmm = 1.0;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * s;
  if (l == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pm1;
  double pl = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pl = ((2.0 * ll - 1.0) * x * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = pl;
  }
  return pl;
}

double spherical_harmonic_equator(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw ArgumentError("spherical_harmonic_equator: need |m| <= l");
  const int am = std::abs(m);
  const double norm =
      std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI) * factorial(l - am) / factorial(l + am));
  const double y = norm * associated_legendre(l, am, 0.0);
  // Y_{l,-m} = (-1)^m Y_{l,m}^*; real at phi = 0.
  return (m < 0 && am % 2 != 0) ? -y : y;
}

ComplexVector dicke_state(int n_at, int n_e) {
  if (n_e < 0 || n_e > n_at) throw ArgumentError("dicke_state: n_e out of range");
  const std::size_t dim = hilbert_dim(n_at);
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (excitation_count(i) == n_e) v(static_cast<Eigen::Index>(i)) = 1.0;
  }
  return v / v.norm();
}

PureState agarwal_puri_state(const ArrayGeometry& geo, const BathParams& bath, int l) {
  if (geo.n_at % 2 != 0) throw PreconditionError("agarwal_puri_state: n_at must be even");
  if (!near_integer_multiple(geo.k0a, 2.0 * M_PI)) {
    throw PreconditionError("agarwal_puri_state: requires k0a = 0 mod 2 pi");
  }
  if (!near_integer_multiple(geo.k0zc, M_PI) && !near_integer_multiple(geo.k0zc - M_PI / 2, M_PI)) {
    throw PreconditionError("agarwal_puri_state: requires k0zc in {0, pi/2} mod pi");
  }
  if (l != geo.n_at / 2) {
    throw ArgumentError("agarwal_puri_state: the symmetric sector has l = n_at/2");
  }
  const double eta = bath.eta();
  const auto [jx, jy] = squeezed_jumps(geo, bath);

  std::vector<Complex> printed;
  for (int m = -l; m <= l; ++m) {
    const int half = (l + m) % 2 == 0 ? (l + m) / 2 : 0;
    const double sign = half % 2 == 0 ? 1.0 : -1.0;
    printed.emplace_back(std::exp(-eta * m) * sign * spherical_harmonic_equator(l, m));
  }

  // The relative phase between excitation sectors two apart is a gauge the
  // closed form leaves open; pick the one the jumps annihilate.
  const Complex phase = std::polar(1.0, bath.phi());
  for (Complex w : {Complex{1.0}, Complex{-1.0}, phase, -phase}) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(hilbert_dim(geo.n_at)));
    for (int m = -l; m <= l; ++m) {
      const Complex a = printed[static_cast<std::size_t>(m + l)];
      if (a == Complex{}) continue;
      v += a * std::pow(w, (l + m) / 2) * dicke_state(geo.n_at, m + l);
    }
    v /= v.norm();
    if ((jx * v).norm() <= 1e-10 && (jy * v).norm() <= 1e-10) return PureState(std::move(v));
  }
  throw PreconditionError("agarwal_puri_state: no sector phase yields a dark state");
}

std::vector<double> predicted_populations(PopulationLaw law, int n_at, const BathParams& bath) {
  if (n_at < 1) throw ArgumentError("predicted_populations: n_at must be >= 1");
  const double x = bath.thermal_ratio();
  std::vector<double> p(static_cast<std::size_t>(n_at + 1), 0.0);
  switch (law) {
    case PopulationLaw::kThermal: {
      double z = 0.0;
      for (int i = 0; i <= n_at; ++i) z += std::pow(x, i);
      for (int i = 0; i <= n_at; ++i) p[static_cast<std::size_t>(i)] = std::pow(x, i) / z;
      break;
    }
    case PopulationLaw::kSqueezed: {
      if (n_at % 2 != 0) throw ArgumentError("predicted_populations: squeezed law needs even n_at");
      const int l = n_at / 2;
      double z = 0.0;
      for (int ne = 0; ne <= n_at; ++ne) {
        const int m = ne - l;
        const double y = spherical_harmonic_equator(l, m);
        const double w = y * y * std::pow(x, 0.5 * m);
        p[static_cast<std::size_t>(ne)] = w;
        z += w;
      }
      for (double& v : p) v /= z;
      break;
    }
    case PopulationLaw::kDimer: {
      if (n_at % 2 != 0) throw ArgumentError("predicted_populations: dimer law needs even n_at");
      const int pairs = n_at / 2;
      const double ground = (bath.n_ph() + 1.0) / (2.0 * bath.n_ph() + 1.0);
      for (int k = 0; k <= pairs; ++k) {
        p[static_cast<std::size_t>(2 * k)] = binomial(pairs, k) * std::pow(ground, pairs) * std::pow(x, k);
      }
      break;
    }
    default:
      throw ArgumentError("predicted_populations: invalid law");
  }
  return p;
}

}  // namespace darkdimer
