#include "stepforce/limits.hpp"

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

TEST_SUITE("limits") {

TEST_CASE("log-log slope") {
  const std::vector<double> x{1.0, 10.0, 100.0};
  CHECK(loglog_slope(x, {3.0, 0.03, 3e-4}) == doctest::Approx(-2.0));
  CHECK(loglog_slope(x, {-1.0, -10.0, -100.0}) == doctest::Approx(1.0));
}

TEST_CASE("KFG tends to S as c grows") {
  const auto t = nonrel_residuals(0.1, {10.0, 100.0, 1000.0}, PhysicalParams::natural(0.05));
  REQUIRE(t.rows.size() == 3);
  for (const auto &r : t.rows)
    CHECK(r.tag == "ok");
  CHECK(t.rows[0].energy == doctest::Approx(100.1));
  CHECK(t.rows[2].residual_density < 1e-6);
  CHECK(t.rows[2].residual_force < 1e-7);
  CHECK(t.slope_density == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(t.slope_force == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("nonrelativistic table tags") {
  const auto flat = nonrel_residuals(0.1, {10.0, 100.0}, PhysicalParams::natural(0.0));
  for (const auto &r : flat.rows)
    CHECK(r.tag == "degenerate");
  CHECK(std::isnan(flat.slope_force));
  // E_nr = 0.5 is not small against mc^2 = 0.25
  const auto hot = nonrel_residuals(0.5, {0.5, 100.0}, PhysicalParams::natural(0.05));
  CHECK(hot.rows[0].tag == "not-nonrelativistic");
  CHECK(hot.rows[1].tag == "ok");
  CHECK(nonrel_probes().size() >= 4);
}

TEST_CASE("infinite step candidate converges like 1/V0") {
  const auto t = infinite_step_sweep(1.0, {0.5, 10.0, 100.0, 1000.0}, PhysicalParams::natural(0.0));
  REQUIRE(t.rows.size() == 3);
  REQUIRE(t.rejected.size() == 1);
  CHECK(t.rejected[0] == 0.5);
  for (const auto &r : t.rows) {
    CHECK(r.route_a == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(r.exact == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(std::abs(r.identity_residual) <= 1e-12);
    // -(1/2)|psi_x(0-)|^2 = -4 (1 - E/V0) exactly
    CHECK(r.candidate == doctest::Approx(-4.0 * (1.0 - 1.0 / r.v0)).epsilon(1e-12));
  }
  CHECK(t.slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("weak product of a tall smooth step") {
  const auto p = PhysicalParams::natural(1e4);
  double prev = 1.0;
  for (double eps : {2e-3, 1e-3, 5e-4}) {
    const auto w = weak_product_check(1.0, RegularizedPotential(p, eps, Shape::logistic), 0.1);
    CHECK(w.deviation < prev);
    if (eps == 1e-3)
      CHECK(w.deviation <= 0.05);
    prev = w.deviation;
  }
  CHECK(domain_kind([&] {
          weak_product_check(1.0, RegularizedPotential(p, 0.1, Shape::logistic), 0.1);
        }) == "unresolved-window");
}

}
