#include "stepforce/acceptance.hpp"
#include "stepforce/force.hpp"

#include <doctest.h>

#include <cmath>

using namespace stepforce;

TEST_SUITE("modes") {

TEST_CASE("theory names") {
  CHECK(theory_from_string("KFG") == Theory::KFG);
  CHECK(theory_from_string("s") == Theory::S);
  CHECK(theory_from_string("d") == Theory::D);
  CHECK_THROWS(theory_from_string("dirac-ish"));
}

TEST_CASE("frozen flagship amplitudes") {
  const auto p = PhysicalParams::natural(0.5);
  // S, E = 1: r = 3 - 2 sqrt 2
  const auto s = solve_step_mode(Theory::S, 1.0, p);
  CHECK(s.regime == Regime::propagating);
  CHECK(std::abs(s.r - cplx(3.0 - 2.0 * std::sqrt(2.0), 0.0)) < 1e-14);
  // KFG, E = 2: k = sqrt 3, q = sqrt(5)/2
  const auto kfg = solve_step_mode(Theory::KFG, 2.0, p);
  CHECK(std::abs(kfg.r - cplx(0.215438087881476, 0.0)) < 1e-13);
  CHECK(std::abs(kfg.t - cplx(1.215438087881476, 0.0)) < 1e-13);
  // D, E = 2: lambda = k/(E + 1), lambda' = q/(E - V0 + 1)
  const auto d = solve_step_mode(Theory::D, 2.0, p);
  CHECK(std::norm(d.r) == doctest::Approx(0.016133230340664904).epsilon(1e-12));
  CHECK(1.0 - std::norm(d.r) == doctest::Approx(0.9838667696593351).epsilon(1e-12));
}

TEST_CASE("dispersion regimes and the Klein sign") {
  const auto p = PhysicalParams::natural(0.0);
  CHECK(dispersion(Theory::S, 1.0, 2.0, p).regime == Regime::evanescent);
  CHECK(dispersion(Theory::S, 1.0, 1.0, p).regime == Regime::threshold);
  const auto klein = dispersion(Theory::KFG, 2.0, 5.0, p);
  CHECK(klein.regime == Regime::klein);
  CHECK(klein.value.real() == doctest::Approx(-std::sqrt(8.0)));
  const auto gap = dispersion(Theory::D, 2.0, 2.5, p);
  CHECK(gap.regime == Regime::evanescent);
  CHECK(gap.value.imag() == doctest::Approx(std::sqrt(0.75)));
  CHECK(wavenumber_squared(Theory::S, 1.5, 0.5, p) == doctest::Approx(2.0));
  CHECK(wavenumber_squared(Theory::KFG, 2.0, 0.5, p) == doctest::Approx(1.25));
}

TEST_CASE("below threshold is rejected") {
  const auto p = PhysicalParams::natural(0.5);
  for (auto [th, e] : {std::pair{Theory::S, -0.1}, std::pair{Theory::KFG, 0.5},
                       std::pair{Theory::D, 0.9}}) {
    try {
      solve_step_mode(th, e, p);
      FAIL("expected below-threshold");
    } catch (const DomainError &err) {
      CHECK(err.kind() == "below-threshold");
    }
  }
}

TEST_CASE("the analytic mode refuses x = 0 but has one-sided limits") {
  const auto m = solve_step_mode(Theory::S, 1.0, PhysicalParams::natural(0.5));
  CHECK_THROWS_AS(m.psi(0.0), DomainError);
  CHECK(std::abs(m.psi_at(Side::left) - m.psi_at(Side::right)) < 1e-15);
  CHECK(std::abs(m.psi(-1e-9) - m.psi_at(Side::left)) < 1e-8);
}

TEST_CASE("matching and flux over random admissible draws") {
  for (Theory th : {Theory::S, Theory::KFG, Theory::D}) {
    CAPTURE(to_string(th));
    for (const auto &d : random_admissible(th, 200, 17)) {
      CAPTURE(d.energy);
      CAPTURE(d.v0);
      const auto m = solve_step_mode(th, d.energy, PhysicalParams::natural(d.v0));
      const double jl = current(m, -0.7), jr = current(m, 0.9);
      CHECK(std::abs(jl - jr) <= 1e-12 * std::max(1.0, std::abs(current(m, -1.0))));
      if (m.regime == Regime::evanescent)
        CHECK(std::abs(std::abs(m.r) - 1.0) < 1e-12);
      // Klein zone: bosons reflect more than they receive, fermions do not
      if (m.regime == Regime::klein)
        CHECK((std::abs(m.r) > 1.0) == (th == Theory::KFG));
    }
  }
}

TEST_CASE("random draws are reproducible and stay in range") {
  const auto a = random_admissible(Theory::KFG, 50, 3);
  const auto b = random_admissible(Theory::KFG, 50, 3);
  const auto c = random_admissible(Theory::KFG, 50, 4);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].energy == b[i].energy);
    CHECK(a[i].v0 == b[i].v0);
    CHECK(a[i].energy > 1.0);
    differs |= a[i].energy != c[i].energy;
  }
  CHECK(differs);
  UniformSource u(0);
  CHECK(u() == std::ldexp(static_cast<double>(std::mt19937_64(0)() >> 11), -53));
}

TEST_CASE("matricial boundary conditions") {
  const auto flag = solve_step_mode(Theory::KFG, 2.0, PhysicalParams::natural(0.5));
  const auto res = bc_residuals(fv_lift(flag), flag.params);
  CHECK(res.psi_jump <= 1e-12);
  CHECK(res.psix_jump <= 1e-12);
  CHECK(res.psi_projected <= 1e-12);
  CHECK(res.psix_projected <= 1e-12);
  CHECK(fv_system_residual(flag, -1.0) <= 1e-10);
  CHECK(fv_system_residual(flag, 1.0) <= 1e-10);
  // the unprojected jump is not small: it is the V0/2mc^2 term
  const auto b = fv_lift(flag);
  CHECK((b.psi_right - b.psi_left).norm() > 0.1);
  for (const auto &d : random_admissible(Theory::KFG, 100, 8)) {
    const auto m = solve_step_mode(Theory::KFG, d.energy, PhysicalParams::natural(d.v0));
    CHECK(bc_residuals(fv_lift(m), m.params).max() <= 1e-12);
  }
}

TEST_CASE("lift of scalar data") {
  const auto p = PhysicalParams::natural(0.0);
  const Spinor s = fv_lift_value(cplx(2.0, 0.0), 3.0, 0.0, p);
  CHECK(s(0).real() == doctest::Approx(4.0));
  CHECK(s(1).real() == doctest::Approx(-2.0));
}

TEST_CASE("dirac representation independence") {
  const auto p = PhysicalParams::natural(0.5);
  const auto std_set = MatrixSet::standard();
  CHECK(std_set.algebra_defect() < 1e-15);
  const auto generic = solve_dirac_generic(2.0, p, std_set);
  const auto closed = solve_step_mode(Theory::D, 2.0, p);
  CHECK(std::abs(generic.r - closed.r) < 1e-12);
  CHECK(std::abs(generic.t - closed.t) < 1e-12);

  const double th = 0.37;
  Mat2 u;
  u << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Mat2 phase;
  phase << 1.0, 0.0, 0.0, std::polar(1.0, 0.8);
  for (const Mat2 &rot : {u, Mat2(phase * u)}) {
    const auto cmp = representation_swap_check(2.0, p, std_set.conjugated(rot));
    CHECK(cmp.max_difference() <= 1e-12);
    CHECK(cmp.r2_default == doctest::Approx(0.016133230340664904));
  }
  auto broken = std_set;
  broken.beta = broken.alpha;
  try {
    representation_swap_check(2.0, p, broken);
    FAIL("expected invalid-representation");
  } catch (const DomainError &e) {
    CHECK(e.kind() == "invalid-representation");
  }
}

}
