#include <doctest.h>

#include <cmath>

#include "darkdimer/darkstates.hpp"
#include "darkdimer/observables.hpp"
#include "support.hpp"

using namespace darkdimer;
using doctest::Approx;

namespace {
PureState ground(int n_at) { return PureState(basis_vector(std::vector<bool>(n_at, false))); }
}  // namespace

TEST_CASE("ground-state moments") {
  const PolarizationMoments pm = polarization_moments(ground(4), make_geometry(4, 1.0, 0.0));
  CHECK(pm.mean_z == Approx(-2.0));
  CHECK(pm.var_x == Approx(1.0));
  CHECK(pm.var_y == Approx(1.0));
  CHECK(std::abs(pm.var_z) < 1e-14);
  CHECK(std::abs(pm.mean_x) < 1e-14);
}

TEST_CASE("squeezed pair moments, correlations and populations") {
  const ArrayGeometry geo = make_geometry(2, M_PI / 4, 0.0);
  const BathParams b = make_bath(0.88);
  const PureState pair = pair_state(geo, b, {1, 2, PairKind::kSqueezed});

  const PolarizationMoments pm = polarization_moments(pair, geo);
  CHECK(pm.mean_z == Approx(-0.3623188).epsilon(1e-7));
  CHECK(pm.mean_z == Approx(-1.0 / (2 * 0.88 + 1)));
  CHECK(pm.var_x == Approx(0.0339729).epsilon(1e-6));
  CHECK(pm.var_y == Approx(0.9660271).epsilon(1e-7));
  CHECK(pm.var_x * pm.var_y == Approx(pm.mean_z * pm.mean_z / 4.0));

  const CorrelationMatrix c = pair_correlations(pair, geo);
  CHECK(c.at(0, 1) == Approx(-0.2330136).epsilon(1e-6));
  CHECK(c.at(1, 0) == Approx(c.at(0, 1)));
  CHECK(c.at(0, 0) == Approx(0.25));

  const auto pops = excitation_populations(pair);
  CHECK(pops[0] == Approx(1.88 / 2.76));
  CHECK(pops[0] == Approx(0.681159).epsilon(1e-6));
  CHECK(pops[1] == Approx(0.0));
  CHECK(pops[2] == Approx(0.318841).epsilon(1e-6));
}

TEST_CASE("chain variance adds over pairs") {
  const ArrayGeometry geo = make_geometry(6, M_PI / 4, 0.0);
  const BathParams b = make_bath(0.88);
  const PolarizationMoments chain = polarization_moments(dimer_chain(geo, b), geo);
  double sum = 0.0;
  for (int p = 0; p < 3; ++p) {
    const ArrayGeometry sub = make_geometry(2, M_PI / 4, 0.5 * (geo.k0z[2 * p] + geo.k0z[2 * p + 1]));
    sum += polarization_moments(pair_state(sub, b, {1, 2, PairKind::kSqueezed}), sub).var_x;
  }
  CHECK(chain.var_x == Approx(sum).epsilon(1e-12));
}

TEST_CASE("collective spin matches per-atom sums") {
  std::mt19937 rng(4);
  const int n = 3;
  const ComplexMatrix rho = testing::random_density(8, rng);
  const CollectiveSpin spin(n);
  const PolarizationMoments pm = spin.moments(rho);
  ComplexMatrix sx = ComplexMatrix::Zero(8, 8);
  for (int k = 1; k <= n; ++k) sx += 0.5 * embed_single_site(sigma_x(), k, n);
  const double mx = (rho * sx).trace().real();
  CHECK(pm.mean_x == Approx(mx));
  CHECK(pm.var_x == Approx((rho * sx * sx).trace().real() - mx * mx));
}

TEST_CASE("purity") {
  CHECK(purity(DensityMatrix::from_pure(ground(2))) == Approx(1.0));
  CHECK(purity(DensityMatrix::maximally_mixed(16)) == Approx(1.0 / 16));
}

TEST_CASE("pair correlations against direct expectation values") {
  std::mt19937 rng(21);
  const ComplexMatrix rho = testing::random_density(16, rng);
  const CorrelationMatrix c = pair_correlations(rho, 4);
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= 4; ++m) {
      const ComplexMatrix op =
          embed_single_site(sigma_x(), n, 4) * embed_single_site(sigma_x(), m, 4);
      CHECK(c.at(n - 1, m - 1) == Approx(0.25 * (rho * op).trace().real()).epsilon(1e-12));
    }
  }
  const CorrelationMatrix g = pair_correlations(ground(3), make_geometry(3, 1.0, 0.0));
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < 3; ++m) CHECK(g.at(n, m) == Approx(n == m ? 0.25 : 0.0));
  }
}

TEST_CASE("excitation populations") {
  const auto p = excitation_populations(ground(3));
  CHECK(p == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  const auto mixed = excitation_populations(DensityMatrix::maximally_mixed(8));
  CHECK(mixed[1] == Approx(3.0 / 8));
}

TEST_CASE("dark condition") {
  const BathParams b = make_bath(0.88);
  CHECK(dark_condition(make_geometry(2, M_PI / 4, 0.0), b) <= 1e-12);
  CHECK(dark_condition(make_geometry(1, 0.0, 0.3), b) > 1e-3);
  // cos k0(z1 + z2) = 0 with sin k0a != 0
  CHECK(dark_condition(make_geometry(2, M_PI / 4, M_PI / 4), b) > 1e-3);
}

TEST_CASE("fidelity") {
  const PureState a = ground(2);
  const PureState b(basis_vector({true, false}));
  CHECK(fidelity(a, a) == Approx(1.0));
  CHECK(fidelity(a, b) == Approx(0.0));
  CHECK(fidelity(a, DensityMatrix::maximally_mixed(4)) == Approx(0.25));
  CHECK(fidelity(DensityMatrix::maximally_mixed(4), a) == Approx(0.25));
  CHECK(fidelity(DensityMatrix::from_pure(a), DensityMatrix::from_pure(a)) == Approx(1.0));
}
