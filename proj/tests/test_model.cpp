#include <doctest.h>

#include <cmath>

#include "darkdimer/errors.hpp"
#include "darkdimer/model.hpp"
#include "support.hpp"

using namespace darkdimer;
using doctest::Approx;

TEST_CASE("bath at minimal uncertainty") {
  const BathParams b = make_bath(0.88);
  CHECK(b.is_minimal());
  CHECK(std::norm(b.mu()) == Approx(1.88).epsilon(1e-12));
  CHECK(std::norm(b.nu()) == Approx(0.88).epsilon(1e-12));
  CHECK(std::norm(b.mu()) - std::norm(b.nu()) == Approx(1.0).epsilon(1e-12));
  CHECK(b.m_abs() == Approx(1.2862348).epsilon(1e-7));
  CHECK(b.mu().real() == Approx(1.3711309).epsilon(1e-7));
  CHECK(b.nu().real() == Approx(-0.9380832).epsilon(1e-7));
  CHECK(b.eta() == Approx(0.1897763).epsilon(1e-6));
  CHECK(std::abs(b.nu() * std::conj(b.mu()) + b.m_ph()) < 1e-12);
  CHECK(std::exp(-b.eta()) * std::abs(b.mu()) == Approx(std::exp(b.eta()) * std::abs(b.nu())));
  CHECK(b.thermal_ratio() == Approx(0.4680851).epsilon(1e-7));
}

TEST_CASE("bath phase enters nu") {
  const BathParams b = make_bath(0.5, 0.7);
  CHECK(std::abs(b.nu() * std::conj(b.mu()) + b.m_ph()) < 1e-12);
  CHECK(b.mu().imag() == 0.0);
}

TEST_CASE("vacuum and non-minimal baths") {
  const BathParams vac = make_bath(0.0);
  CHECK(vac.mu() == Complex(1.0));
  CHECK(std::abs(vac.nu()) == 0.0);
  CHECK_THROWS_AS(vac.eta(), UndefinedValueError);

  const BathParams thermal = make_bath(0.5, 0.0, false);
  CHECK_FALSE(thermal.is_minimal());
  CHECK(thermal.m_abs() == 0.0);
  CHECK_THROWS_AS(thermal.mu(), PreconditionError);
  CHECK_THROWS_AS(thermal.eta(), PreconditionError);

  CHECK(make_bath(0.5, 0.0, false, std::sqrt(0.75)).is_minimal());
  CHECK_THROWS_AS(make_bath(0.5, 0.0, false, 0.9), ArgumentError);
  CHECK_THROWS_AS(make_bath(-0.1), ArgumentError);
}

TEST_CASE("geometry") {
  const ArrayGeometry g = make_geometry(4, M_PI / 4, 0.0);
  const double expect[] = {-3 * M_PI / 8, -M_PI / 8, M_PI / 8, 3 * M_PI / 8};
  for (int i = 0; i < 4; ++i) CHECK(g.k0z[static_cast<std::size_t>(i)] == Approx(expect[i]));

  const ArrayGeometry g2 = make_geometry(2, M_PI, 0.0);
  CHECK(g2.k0z[0] == Approx(-M_PI / 2));
  CHECK(g2.k0z[1] == Approx(M_PI / 2));

  const ArrayGeometry g6 = make_geometry(6, M_PI / 4, 0.0);
  const double centres[] = {-M_PI / 2, 0.0, M_PI / 2};
  for (int p = 0; p < 3; ++p) {
    const auto i = static_cast<std::size_t>(2 * p);
    CHECK(0.5 * (g6.k0z[i] + g6.k0z[i + 1]) == Approx(centres[p]));
  }
  CHECK_NOTHROW(make_geometry(3, 0.0, 0.0));
  CHECK_THROWS_AS(make_geometry(0, 1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(make_geometry(2, -1.0, 0.0), ArgumentError);
}

TEST_CASE("scattering Hamiltonian") {
  CHECK(testing::max_abs(hamiltonian_scatt(make_geometry(2, M_PI, 0.0), 1.0)) < 1e-15);

  const ComplexMatrix h = hamiltonian_scatt(make_geometry(2, M_PI / 4, 0.0), 1.0);
  CHECK(is_hermitian(h));
  CHECK(h(1, 2).real() == Approx(0.5 * std::sin(M_PI / 4)));
  CHECK(h(1, 2).real() == Approx(0.353553).epsilon(1e-6));
  CHECK(std::abs(h(0, 0)) < 1e-15);

  const ArrayGeometry g3 = make_geometry(3, M_PI / 2, 0.0);
  const ComplexMatrix h3 = hamiltonian_scatt(g3, 1.0);
  // |egg> = 4, |geg> = 2, |gge> = 1
  CHECK(std::abs(h3(4, 1)) < 1e-15);
  CHECK(h3(4, 2).real() == Approx(0.5));
  CHECK(h3(2, 1).real() == Approx(0.5));
}

TEST_CASE("travelling jumps") {
  const ArrayGeometry g1 = make_geometry(1, 0.0, 0.0);
  CHECK(jump_travelling(g1, Direction::kRight).isApprox(sigma_minus()));
  CHECK(jump_travelling(g1, Direction::kLeft).isApprox(sigma_minus()));

  const ArrayGeometry g2 = make_geometry(2, M_PI / 4, 0.0);
  const ComplexMatrix expect = std::exp(kI * (M_PI / 8)) * embed_single_site(sigma_minus(), 1, 2) +
                               std::exp(-kI * (M_PI / 8)) * embed_single_site(sigma_minus(), 2, 2);
  CHECK(jump_travelling(g2, Direction::kRight).isApprox(expect));

  const ArrayGeometry g4 = make_geometry(4, 0.3, 0.7);
  const StandingOps s = standing_ops(g4);
  for (Direction d : {Direction::kRight, Direction::kLeft}) {
    const ComplexMatrix diff = jump_travelling(g4, d) - (s.minus_r - kI * sign_of(d) * s.minus_i);
    CHECK(testing::max_abs(diff) < 1e-14);
  }
}

TEST_CASE("quadrature jumps") {
  const ArrayGeometry g = make_geometry(3, 0.4, 0.2);
  const ComplexMatrix j = jump_travelling(g, Direction::kLeft);
  const ComplexMatrix j0 = jump_quadrature(g, Direction::kLeft, 0.0);
  CHECK(j0.isApprox(j + j.adjoint()));
  CHECK(is_hermitian(j0));
  CHECK(jump_quadrature(g, Direction::kLeft, M_PI).isApprox(kI * (j - j.adjoint())));
  CHECK(jump_quadrature(make_geometry(1, 0.0, 0.0), Direction::kRight, 0.0).isApprox(sigma_x()));
}

TEST_CASE("standing operators") {
  const StandingOps s1 = standing_ops(make_geometry(1, 0.0, 0.0));
  CHECK(s1.plus_r.isApprox(sigma_plus()));
  CHECK(s1.minus_r.isApprox(sigma_minus()));
  CHECK(testing::max_abs(s1.plus_i) < 1e-15);

  const StandingOps s2 = standing_ops(make_geometry(2, M_PI, 0.0));
  CHECK(testing::max_abs(s2.minus_r) < 1e-15);
  const ComplexMatrix expect =
      -embed_single_site(sigma_minus(), 1, 2) + embed_single_site(sigma_minus(), 2, 2);
  CHECK(testing::max_abs(s2.minus_i - expect) < 1e-15);

  const StandingOps s3 = standing_ops(make_geometry(2, M_PI / 4, 0.0));
  const ComplexVector ge = basis_vector({false, true});
  const ComplexVector eg = basis_vector({true, false});
  const ComplexVector gg = basis_vector({false, false});
  CHECK(gg.dot(s3.minus_i * eg).real() == Approx(-std::sin(M_PI / 8)));
  CHECK(gg.dot(s3.minus_i * ge).real() == Approx(std::sin(M_PI / 8)));
  CHECK(gg.dot(s3.minus_r * eg).real() == Approx(gg.dot(s3.minus_r * ge).real()));
}

TEST_CASE("squeezed jumps") {
  const BathParams b = make_bath(0.88);
  const ArrayGeometry g1 = make_geometry(1, 0.0, 0.0);
  const auto [jx1, jy1] = squeezed_jumps(g1, b);
  CHECK(testing::max_abs(jx1) < 1e-15);
  const double s = std::sqrt(std::abs(4.0 * b.mu() * b.nu()));
  CHECK(jy1.isApprox((b.mu() * sigma_minus() - b.nu() * sigma_plus()) / s));

  const ArrayGeometry g2 = make_geometry(2, M_PI / 4, 0.0);
  const auto [jx, jy] = squeezed_jumps(g2, b);
  CHECK_FALSE(is_hermitian(jx));
  CHECK_FALSE((jy * jy.adjoint()).isApprox(jy.adjoint() * jy));
  ComplexVector pair = b.mu() * basis_vector({false, false}) + b.nu() * basis_vector({true, true});
  pair.normalize();
  CHECK((jx * pair).norm() < 1e-12);
  CHECK((jy * pair).norm() < 1e-12);

  CHECK_THROWS_AS(squeezed_jumps(g2, make_bath(0.0)), UndefinedValueError);
  CHECK_THROWS_AS(squeezed_jumps(g2, make_bath(0.5, 0.0, false)), PreconditionError);
}

TEST_CASE("field two-point function") {
  const BathParams b = make_bath(0.88);
  CHECK(field_two_point(0.0, 0.0, 0.0, b) == Approx(1.3331174).epsilon(1e-7));
  CHECK(field_two_point(0.3, 1.1, M_PI / 2, b) == Approx(0.5 * 1.38));
  CHECK(field_two_point(0.3, 0.9, M_PI / 2, b) == Approx(0.5 * 1.38));
  CHECK(field_two_point(M_PI / 2, M_PI / 2, 0.0, b) == Approx(0.5 * 1.38 - 0.5 * b.m_abs()));
}

TEST_CASE("model channel prefactors") {
  const BathParams b = make_bath(0.88, 0.3);
  const ModelOperators m = build_model(make_geometry(2, M_PI / 4, 0.0), b, 2.0);
  REQUIRE(m.travelling.size() == 8);
  const double rates[] = {0.5 * 2.0 * 1.88, 0.5 * 2.0 * 0.88, 0.25 * 2.0 * b.m_abs(),
                          -0.25 * 2.0 * b.m_abs()};
  for (std::size_t i = 0; i < 8; ++i) CHECK(m.travelling[i].rate == rates[i % 4]);
  REQUIRE(m.squeezed.has_value());
  CHECK((*m.squeezed)[0].rate == Approx(4.0 * 2.0 * std::abs(b.mu() * b.nu())));
  CHECK(is_hermitian(m.hamiltonian));

  CHECK_FALSE(build_model(make_geometry(2, 1.0, 0.0), make_bath(0.0)).squeezed.has_value());
}

TEST_CASE("squeezed rate approaches 4 gamma N for large N") {
  const BathParams b = make_bath(1e4);
  CHECK(4.0 * std::abs(b.mu() * b.nu()) / (4.0 * 1e4) == Approx(1.0).epsilon(1e-4));
}
