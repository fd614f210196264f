#include "stepforce/core.hpp"

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

} // namespace

TEST_SUITE("core") {

TEST_CASE("params validate hbar, mass and c") {
  CHECK(domain_kind([] { PhysicalParams::make(0.0, 1.0, 1.0, 0.5); }) == "invalid-params");
  CHECK(domain_kind([] { PhysicalParams::make(1.0, -1.0, 1.0, 0.5); }) == "invalid-params");
  CHECK(domain_kind([] { PhysicalParams::make(1.0, 1.0, NAN, 0.5); }) == "invalid-params");
  const auto p = PhysicalParams::natural(0.5);
  CHECK(p.natural_units());
  CHECK(p.rest_energy() == 1.0);
  CHECK(p.with_c(10.0).rest_energy() == doctest::Approx(100.0));
  CHECK(p.with_v0(3.0).v0 == 3.0);
}

TEST_CASE("si conversion lands in natural units") {
  // electron-like numbers; V0 = 0.5 m c^2
  const double hbar = 1.054571817e-34, m = 9.1093837015e-31, c = 299792458.0;
  const auto p = PhysicalParams::from_si(hbar, m, c, 0.5 * m * c * c);
  CHECK(p.natural_units());
  CHECK(p.v0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sharp step is undefined at the origin") {
  const StepPotential step(PhysicalParams::natural(0.5));
  CHECK(step.eval(-1e-300) == 0.0);
  CHECK(step.eval(1e-300) == 0.5);
  CHECK(domain_kind([&] { step.eval(0.0); }) == "undefined-at-origin");
  CHECK(step.one_sided(Side::left) == 0.0);
  CHECK(step.one_sided(Side::right) == 0.5);
}

TEST_CASE("shape names") {
  CHECK(shape_from_string("logistic") == Shape::logistic);
  CHECK(shape_from_string("erf") == Shape::error_function);
  CHECK(shape_from_string("linear-ramp") == Shape::linear_ramp);
  CHECK(shape_from_string(to_string(Shape::linear_ramp)) == Shape::linear_ramp);
  CHECK_THROWS(shape_from_string("boxcar"));
}

TEST_CASE("regularized steps: limits, midpoint, unit-area derivative") {
  const auto p = PhysicalParams::natural(0.7);
  for (Shape sh : {Shape::logistic, Shape::error_function, Shape::linear_ramp}) {
    CAPTURE(to_string(sh));
    for (double eps : {0.3, 0.01}) {
      const RegularizedPotential pot(p, eps, sh);
      const double w = pot.support_half_width();
      CHECK(pot.eval(0.0) == doctest::Approx(0.35).epsilon(1e-14));
      CHECK(std::abs(pot.eval(-w)) < 1e-15);
      CHECK(std::abs(pot.eval(w) - 0.7) < 1e-15);
      // monotone and odd about the midpoint
      double prev = -1.0;
      for (int i = -50; i <= 50; ++i) {
        const double x = w * i / 50.0;
        CHECK(pot.eval(x) >= prev);
        prev = pot.eval(x);
        CHECK(pot.eval(x) + pot.eval(-x) == doctest::Approx(0.7).epsilon(1e-13));
      }
      // Simpson over the support
      const int n = 20000;
      const double h = 2.0 * w / n;
      double area = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        area += wt * pot.derivative(-w + i * h);
      }
      area *= h / 3.0;
      CHECK(area == doctest::Approx(0.7).epsilon(sh == Shape::linear_ramp ? 1e-3 : 1e-9));
    }
  }
  CHECK(domain_kind([&] { RegularizedPotential(p, 0.0, Shape::logistic); }) == "invalid-width");
  CHECK(domain_kind([&] { RegularizedPotential(p, -1.0, Shape::error_function); }) == "invalid-width");
}

TEST_CASE("derivative matches a finite difference") {
  const RegularizedPotential pot(PhysicalParams::natural(2.0), 0.1, Shape::logistic);
  for (double x : {-0.3, -0.05, 0.0, 0.02, 0.4}) {
    const double h = 1e-5;
    const double fd = (pot.eval(x + h) - pot.eval(x - h)) / (2 * h);
    CHECK(pot.derivative(x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("uniform grid") {
  const auto x = grid_build({-1.0, 1.0, 5});
  REQUIRE(x.size() == 5);
  CHECK(x.front() == -1.0);
  CHECK(x.back() == 1.0);
  CHECK(x[2] == doctest::Approx(0.0));
  CHECK_THROWS_AS(grid_build({0.0, 1.0, 1}), ConfigError);
  CHECK_THROWS_AS(grid_build({1.0, 1.0, 10}), ConfigError);
}

}
