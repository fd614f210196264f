#include "stepforce/acceptance.hpp"
#include "stepforce/force.hpp"

#include <doctest.h>

#include <cmath>

using namespace stepforce;

TEST_SUITE("force") {

// Hand values at V0 = 0.5 in natural units.
// S, E = 1: rho(0) = (1 + r)^2 with r = 3 - 2 sqrt 2.
// KFG, E = 2: |psi(0)|^2 = (2k/(k + q))^2 = 1.4772897454729788.
// D, E = 2: rho(0) = |t|^2 (1 + lambda'^2).

TEST_CASE("S flagship") {
  const auto m = solve_step_mode(Theory::S, 1.0, PhysicalParams::natural(0.5));
  const double rho = std::pow(4.0 - 2.0 * std::sqrt(2.0), 2);
  CHECK(density_at(m, Side::left) == doctest::Approx(rho).epsilon(1e-14));
  CHECK(density_at(m, Side::right) == doctest::Approx(rho).epsilon(1e-14));
  CHECK(mean_force_closed(m) == doctest::Approx(-0.5 * rho).epsilon(1e-14));
  CHECK(std::abs(mean_force_closed(m) - (-0.6862915)) < 1e-7);
  const auto rep = boundary_terms(m);
  CHECK(std::abs(rep.route_c.kinetic_term) < 1e-14);
  CHECK(std::abs(rep.identity_residual) <= 1e-12);
}

TEST_CASE("KFG flagship density jump and force") {
  const auto m = solve_step_mode(Theory::KFG, 2.0, PhysicalParams::natural(0.5));
  const double psi2 = 1.4772897454729788;
  CHECK(density_at(m, Side::left) == doctest::Approx(2.0 * psi2).epsilon(1e-13));
  CHECK(density_at(m, Side::right) == doctest::Approx(1.5 * psi2).epsilon(1e-13));
  CHECK(kfg_density_fv_at(m, Side::left) == doctest::Approx(2.0 * psi2).epsilon(1e-13));
  CHECK(kfg_density_fv_at(m, Side::right) == doctest::Approx(1.5 * psi2).epsilon(1e-13));
  CHECK(kfg_density_fv(m, -0.8) == doctest::Approx(density(m, -0.8)).epsilon(1e-13));

  const auto jump = kfg_density_jump(m);
  CHECK(jump.value == doctest::Approx(-0.5 * psi2).epsilon(1e-13));
  CHECK(jump.relative_residual() <= 1e-12);

  const auto rep = boundary_terms(m);
  CHECK(rep.route_a == doctest::Approx(0.125 * psi2).epsilon(1e-13));
  CHECK(rep.route_a_scalar_form == doctest::Approx(rep.route_a).epsilon(1e-13));
  CHECK(rep.route_c.mass_term == doctest::Approx((0.125 - 1.0) * psi2).epsilon(1e-13));
  CHECK(rep.route_c.potential_term == doctest::Approx(0.75 * psi2).epsilon(1e-13));
  CHECK(std::abs(rep.route_c.kinetic_term) <= 1e-13);
  CHECK(std::abs(rep.identity_residual) <= 1e-12);
  CHECK(std::abs(rep.mass_term_residual) <= 1e-12);
  CHECK(std::abs(rep.kinetic_jump) <= 1e-12);
  CHECK(rep.delta_integral.half_jump == doctest::Approx(-0.25 * psi2).epsilon(1e-13));
  CHECK(rep.delta_integral.midpoint == doctest::Approx(1.75 * psi2).epsilon(1e-13));
}

TEST_CASE("D flagship") {
  const auto m = solve_step_mode(Theory::D, 2.0, PhysicalParams::natural(0.5));
  CHECK(mean_force_closed(m) == doctest::Approx(-0.7620999227554985).epsilon(1e-12));
  CHECK(std::abs(density_at(m, Side::left) - density_at(m, Side::right)) < 1e-13);
}

TEST_CASE("identities hold for every admissible draw") {
  for (Theory th : {Theory::S, Theory::KFG, Theory::D}) {
    CAPTURE(to_string(th));
    for (const auto &d : random_admissible(th, 150, 99)) {
      CAPTURE(d.energy);
      CAPTURE(d.v0);
      const auto m = solve_step_mode(th, d.energy, PhysicalParams::natural(d.v0));
      const auto rep = boundary_terms(m);
      CHECK(std::abs(rep.identity_residual) <= 1e-12);
      const double scale = std::max(std::abs(rep.route_a), 1e-12);
      CHECK(std::abs(rep.route_a_scalar_form - rep.route_a) <= 1e-12 * std::max(1.0, scale));
      if (th == Theory::KFG) {
        CHECK(kfg_density_jump(m).relative_residual() <= 1e-12);
        CHECK(std::abs(rep.mass_term_residual) <= 1e-12);
      } else {
        // S and D densities are continuous at the step
        const double rl = density_at(m, Side::left), rr = density_at(m, Side::right);
        CHECK(std::abs(rl - rr) <= 1e-12 * std::max(1.0, rl));
      }
    }
  }
}

TEST_CASE("S below a tall step: force equals -2 hbar^2 k^2 / m") {
  for (double v0 : {1.5, 3.0, 40.0, 1e4}) {
    const auto m = solve_step_mode(Theory::S, 1.0, PhysicalParams::natural(v0));
    CHECK(m.regime == Regime::evanescent);
    CHECK(mean_force_closed(m) == doctest::Approx(-4.0).epsilon(1e-12));
  }
}

TEST_CASE("probe at the origin") {
  const auto m = solve_step_mode(Theory::KFG, 2.0, PhysicalParams::natural(0.5));
  const auto pr = probe_origin(m);
  CHECK(pr.theory == Theory::KFG);
  CHECK(pr.current_left == doctest::Approx(pr.current_right).epsilon(1e-13));
  CHECK(pr.rho_left > pr.rho_right);
}

}
