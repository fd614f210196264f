#include "stepforce/acceptance.hpp"
#include "stepforce/force.hpp"
#include "stepforce/regularized.hpp"

#include <doctest.h>

#include <cmath>

using namespace stepforce;

namespace {

template <class F> std::string domain_kind(F &&f) {
  try {
    f();
  } catch (const DomainError &e) {
    return e.kind();
  }
  return "";
}

const std::vector<double> halving{0.2, 0.1, 0.05, 0.025, 0.0125};

} // namespace

TEST_SUITE("regularized") {

TEST_CASE("extrapolation of synthetic series") {
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> quad, lin;
  for (double e : eps) {
    quad.push_back(1.25 - 3.0 * e * e);
    lin.push_back(-2.0 + 0.7 * e);
  }
  const auto q = extrapolate(eps, quad);
  CHECK(q.limit == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(q.order == doctest::Approx(2.0).epsilon(1e-9));
  const auto l = extrapolate(eps, lin);
  CHECK(l.limit == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(l.order == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(domain_kind([&] { extrapolate({0.2, 0.1}, {1.0, 1.1}); }) == "invalid-series");
  CHECK(domain_kind([&] { extrapolate({0.1, 0.2, 0.05}, {1, 2, 3}); }) == "invalid-series");
  CHECK(domain_kind([&] { extrapolate({0.4, 0.2, 0.1}, {1.0, 2.0, 1.5}); }) == "no-convergence");
  CHECK(domain_kind([&] { extrapolate({0.4, 0.2, 0.1}, {1.0, 1.1, 1.4}); }) == "no-convergence");

  // tail at the noise floor: the last value stands, order from the head
  const auto sat = extrapolate({0.4, 0.2, 0.1, 0.05, 0.025},
                               {2.16, 2.04, 2.01, 2.0025, 2.0025 - 1e-10});
  CHECK(sat.limit == 2.0025 - 1e-10);
  CHECK(sat.order == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("segment propagators have unit determinant") {
  const auto p = PhysicalParams::natural(0.0);
  for (Theory th : {Theory::S, Theory::KFG, Theory::D})
    for (double phi : {0.0, 1.7, 9.0}) {
      const Mat2 m = segment_propagator(th, 2.0, phi, 0.3, p);
      CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
    }
}

TEST_CASE("piecewise model resolution guards") {
  const RegularizedPotential pot(PhysicalParams::natural(0.5), 0.05, Shape::logistic);
  const auto model = build_piecewise_model(Theory::S, 1.0, pot);
  CHECK(model.boundaries.size() == model.values.size() + 1);
  CHECK(model.boundaries.front() == doctest::Approx(-20.0));
  CHECK(model.core_spacing <= 0.05 / 8.0);
  CHECK(domain_kind([&] { build_piecewise_model(Theory::S, 1.0, pot, {20.0, 2}); }) ==
        "under-resolved");
  CHECK(domain_kind([&] { build_piecewise_model(Theory::S, 1.0, pot, {5.0, 32}); }) ==
        "under-resolved");
  CHECK(domain_kind([&] { solve_smooth_mode(Theory::KFG, 0.5, pot); }) == "below-threshold");
}

TEST_CASE("smooth modes approach the sharp amplitudes") {
  const auto p = PhysicalParams::natural(0.5);
  const auto sharp_kfg = solve_step_mode(Theory::KFG, 2.0, p);
  const auto m = solve_smooth_mode(Theory::KFG, 2.0,
                                   RegularizedPotential(p, 0.05, Shape::logistic));
  CHECK(m.defect() <= 1e-10);
  CHECK(std::abs(m.r() - sharp_kfg.r) <= 0.05);

  // S: |r_eps - r_sharp| shrinks at least linearly under eps halving
  const auto sharp_s = solve_step_mode(Theory::S, 1.0, p);
  double prev = 0.0;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto s = solve_smooth_mode(Theory::S, 1.0, RegularizedPotential(p, eps, Shape::error_function));
    const double err = std::abs(s.r() - sharp_s.r);
    if (prev > 0.0)
      CHECK(err <= 0.55 * prev);
    prev = err;
  }
}

TEST_CASE("numerical mode is the exact solution far from the step") {
  const auto p = PhysicalParams::natural(0.5);
  const auto m = solve_smooth_mode(Theory::D, 2.0, RegularizedPotential(p, 0.1, Shape::error_function));
  CHECK(m.defect() <= 1e-10);
  CHECK(m.current(-30.0) == doctest::Approx(m.current(30.0)).epsilon(1e-10));
  CHECK(m.current(-3.0) == doctest::Approx(m.current(0.01)).epsilon(1e-10));
}

TEST_CASE("route B flagship convergence") {
  const auto p = PhysicalParams::natural(0.5);
  const auto s = extrapolate(route_b_series(Theory::S, 1.0, p, Shape::logistic, halving));
  CHECK(s.limit == doctest::Approx(-0.6862915010152396).epsilon(1e-4));
  CHECK(s.order >= 1.0);
  const auto d = extrapolate(route_b_series(Theory::D, 2.0, p, Shape::error_function, halving));
  CHECK(d.limit == doctest::Approx(-0.7620999227554985).epsilon(1e-4));
  CHECK(d.order >= 1.0);

  // KFG lands on -V0 x midpoint, not on the closed form
  const auto sharp = boundary_terms(solve_step_mode(Theory::KFG, 2.0, p));
  const double midpoint = -0.5 * sharp.delta_integral.midpoint;
  for (Shape sh : {Shape::logistic, Shape::error_function, Shape::linear_ramp}) {
    CAPTURE(to_string(sh));
    const auto k = extrapolate(route_b_series(Theory::KFG, 2.0, p, sh, halving));
    CHECK(k.limit == doctest::Approx(midpoint).epsilon(1e-3));
    CHECK(std::abs(k.limit - sharp.route_a) > 1.0);
  }
}

TEST_CASE("route B agrees with route A for random S and D steps") {
  UniformSource u(2024);
  for (int i = 0; i < 5; ++i) {
    const Theory th = i % 2 ? Theory::D : Theory::S;
    const auto draw = random_admissible(th, 1, 1000 + i).front();
    CAPTURE(to_string(th));
    CAPTURE(draw.energy);
    CAPTURE(draw.v0);
    const auto p = PhysicalParams::natural(draw.v0);
    const double closed = mean_force_closed(solve_step_mode(th, draw.energy, p));
    const Shape sh = u() < 0.5 ? Shape::logistic : Shape::error_function;
    const auto fit = extrapolate(route_b_series(th, draw.energy, p, sh, halving));
    CHECK(std::abs(fit.limit - closed) <= 1e-3 * std::max(std::abs(closed), 1e-2));
  }
}

TEST_CASE("interface jumps of a smooth KFG mode") {
  const auto p = PhysicalParams::natural(0.5);
  double prev_proj = 1.0;
  for (double eps : {0.01, 0.005}) {
    const auto j = jump_diagnostics(2.0, RegularizedPotential(p, eps, Shape::logistic), 0.2);
    CHECK(j.ratio_psi <= 1e-2);
    CHECK(std::abs(j.component_ratio + 1.0) <= 1e-2);
    CHECK(j.deviation_psi <= 5e-2);
    CHECK(j.ratio_psi < prev_proj);
    prev_proj = j.ratio_psi;
  }
  CHECK(domain_kind([&] {
          jump_diagnostics(2.0, RegularizedPotential(p, 0.1, Shape::logistic), 0.2);
        }) == "probe-inside-smoothing");
}

}
