#pragma once

// Closed-form dark states of the array and the population laws they imply.
// Every constructor checks its geometric regime and throws PreconditionError
// outside it.

#include <array>
#include <utility>
#include <vector>

#include "darkdimer/model.hpp"
#include "darkdimer/opalg.hpp"

namespace darkdimer {

enum class PairKind {
  kSym,       // (|g_n e_m> - e^{i k0 (z_m - z_n)} |e_n g_m>) / sqrt(2), needs sin k0(z_m - z_n) = 0
  kSqueezed,  // (mu |g_n g_m> + e^{i k0 (z_n + z_m)} nu* |e_n e_m>) / norm, needs cos k0(z_n + z_m) = +-1
};

/// Atom indices are 1-based, n < m.
struct PairSpec {
  int n = 1;
  int m = 2;
  PairKind kind = PairKind::kSqueezed;
};

/// Two-atom amplitudes on the local basis (gg, ge, eg, ee) of atoms (n, m),
/// first letter for atom n.
std::array<Complex, 4> pair_amplitudes(const ArrayGeometry& geo, const BathParams& bath,
                                       const PairSpec& spec);

/// The pair state on the full array, all other atoms in |g>.
PureState pair_state(const ArrayGeometry& geo, const BathParams& bath, const PairSpec& spec);

/// Tensor product of the given pair states; atoms not covered stay in |g>.
/// Pairs must be disjoint.
PureState paired_product(const ArrayGeometry& geo, const BathParams& bath,
                         const std::vector<PairSpec>& pairs);

/// Product of squeezed nearest-neighbour pairs (1,2), (3,4), ... Requires an
/// even atom number and cos k0(z_{2n-1} + z_{2n}) = +-1 for every pair.
PureState dimer_chain(const ArrayGeometry& geo, const BathParams& bath);

/// || H psi - <psi|H|psi> psi ||: zero iff H keeps psi on its own ray.
double stability_residual(const PureState& psi, const ModelOperators& model);

/// All perfect matchings of atoms 1..n_at (n_at even, <= 8).
std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int n_at);

/// Symmetrized sum over perfect matchings with `l` squeezed pairs and
/// n_at/2 - l sym pairs, over every assignment of kinds to pairs. Needs
/// sin k0a = 0, an even n_at <= 8 and 0 <= l <= n_at/2.
PureState melted_dark(const ArrayGeometry& geo, const BathParams& bath, int l);

/// Statistical weight of n_e excitations in the all-pairs collective dark
/// state: (n_g! n_e!)^{1/2} / (2^{n_at/2} (n_g/2)! (n_e/2)!) for even n_e,
/// zero for odd n_e.
double collective_amplitude(int n_at, int n_e);

/// Associated Legendre function P_l^m(x) with the Condon-Shortley phase.
double associated_legendre(int l, int m, double x);

/// Y_{l,m}(pi/2, 0) for integer l >= 0, |m| <= l.
double spherical_harmonic_equator(int l, int m);

/// Symmetric Dicke state with n_e excitations.
ComplexVector dicke_state(int n_at, int n_e);

/// Collective dark state in the symmetric sector, sum_m e^{-eta m}
/// (-1)^{(l+m)/2} Y_{l,m}(pi/2, 0) |l, m> with l = n_at/2. Needs k0a = 0 mod
/// 2 pi and k0zc in {0, pi/2} mod pi. The sign of the (l+m)/2 factor is
/// chosen so that both squeezed jumps annihilate the state.
PureState agarwal_puri_state(const ArrayGeometry& geo, const BathParams& bath, int l);

enum class PopulationLaw { kThermal, kSqueezed, kDimer };

/// Predicted steady excitation distribution P(n_e), n_e = 0..n_at.
///   thermal:  x^{n_e} / sum_{i=0}^{n_at} x^i, x = N/(N+1)
///   squeezed: |Y_{l,m}(pi/2,0)|^2 x^{m/2} normalized, l = n_at/2, m = n_e - l
///   dimer:    P(2k) = C(n_at/2, k) ((N+1)/(2N+1))^{n_at/2} x^k
std::vector<double> predicted_populations(PopulationLaw law, int n_at, const BathParams& bath);

}  // namespace darkdimer
