#include "stepforce/modes.hpp"
#include "stepforce/timeevo.hpp"

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

const PacketSpec small{-15.0, 2.0, 1.0, {-51.2, 51.18, 5120}};

} // namespace

TEST_SUITE("timeevo") {

TEST_CASE("packet construction") {
  const auto p = PhysicalParams::natural(0.5);
  const RegularizedPotential pot(p, 0.1, Shape::logistic);
  const auto s = gaussian_packet(small, p, pot);
  CHECK(norm_squared(s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation_position(s) == doctest::Approx(-15.0).epsilon(1e-10));
  CHECK(expectation_momentum(s) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(expectation_force(s)) < 1e-12);
  CHECK(wall_amplitude(s) < 1e-12);
  CHECK(max_time_step(s) == doctest::Approx(s.spacing() * s.spacing()));

  CHECK(domain_kind([&] { gaussian_packet({-5.0, 2.0, 1.0, small.grid}, p, pot); }) ==
        "packet-overlap");
  CHECK(domain_kind([&] { gaussian_packet({5.0, 0.5, 1.0, small.grid}, p, pot); }) ==
        "packet-overlap");
  CHECK(domain_kind([&] { gaussian_packet({-15.0, 2.0, 1.0, {-30.0, 30.0, 601}}, p, pot); }) ==
        "box-too-small");
}

TEST_CASE("free packet: constant momentum, uniform drift, unit norm") {
  const auto p = PhysicalParams::natural(0.0);
  const RegularizedPotential flat(p, 0.1, Shape::logistic);
  auto s = gaussian_packet(small, p, flat);
  MomentumMeter meter(s.psi.size());
  double worst_p = 0.0;
  s = evolve(s, 4e-4, 10000, [&](const EvolutionState &st) {
    worst_p = std::max(worst_p, std::abs(meter(st) - 1.0));
  });
  CHECK(s.t == doctest::Approx(4.0));
  CHECK(worst_p < 1e-10);
  CHECK(norm_squared(s) == doctest::Approx(1.0).epsilon(1e-10));
  // <x> moves at <p>/m up to the O(h^2) lattice dispersion
  CHECK(expectation_position(s) == doctest::Approx(-11.0).epsilon(1e-3));
}

TEST_CASE("time step and wall guards") {
  const auto p = PhysicalParams::natural(0.5);
  const RegularizedPotential pot(p, 0.1, Shape::logistic);
  const auto s = gaussian_packet(small, p, pot);
  CHECK(domain_kind([&] { evolve(s, 2.0 * max_time_step(s), 1); }) == "under-resolved");
  // a fast packet in a tight box reaches the right wall
  const auto fast = gaussian_packet({-15.0, 1.5, 6.0, {-30.0, 30.0, 3001}}, p.with_v0(0.0),
                                    RegularizedPotential(p.with_v0(0.0), 0.1, Shape::logistic));
  CHECK(domain_kind([&] { evolve(fast, 4e-4, 50000); }) == "box-too-small");
}

TEST_CASE("Ehrenfest balance across a smooth step") {
  const auto p = PhysicalParams::natural(0.5);
  const RegularizedPotential pot(p, 0.1, Shape::logistic);
  const auto rep = ehrenfest_report(small, p, pot, 4e-4, 45000);
  CHECK(rep.peak_force > 0.01);
  CHECK(rep.relative_deviation() <= 1e-6);
  CHECK(rep.max_norm_drift <= 1e-10);
  CHECK(rep.max_wall_amplitude <= wall_tolerance);
  CHECK(rep.rows.size() == 45000 - 1);
}

TEST_CASE("reflection probability of a wide packet matches the stationary value") {
  // k0 = 2, E = 2 over V0 = 1: |r|^2 = ((2 - sqrt 2)/(2 + sqrt 2))^2
  const auto p = PhysicalParams::natural(1.0);
  const RegularizedPotential pot(p, 0.04, Shape::error_function);
  const PacketSpec spec{-55.0, 7.5, 2.0, {-130.0, 80.0, 10501}};
  auto s = gaussian_packet(spec, p, pot);
  s = evolve(s, 4e-4, 125000);
  const auto sides = side_probabilities(s);
  const double r = std::norm(solve_step_mode(Theory::S, 2.0, p).r);
  CHECK(r == doctest::Approx(0.029437251522859).epsilon(1e-10));
  CHECK(sides.left == doctest::Approx(r).epsilon(0.03));
  CHECK(sides.left + sides.right == doctest::Approx(1.0).epsilon(1e-9));
}

}
