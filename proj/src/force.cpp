#include "stepforce/force.hpp"

#include <algorithm>
#include <cmath>

namespace stepforce {

namespace {

double step_value(const ScatterMode &mode, Side side) {
  return side == Side::left ? 0.0 : mode.v0();
}

double step_value(const ScatterMode &mode, double x) {
  return StepPotential(mode.params).eval(x);
}

double scalar_density(const ScatterMode &mode, cplx psi, double phi) {
  switch (mode.theory) {
  case Theory::S:
    return std::norm(psi);
  case Theory::KFG:
    return (mode.energy - phi) / mode.params.rest_energy() * std::norm(psi);
  case Theory::D:
    break;
  }
  return 0.0;
}

double spinor_current(const ScatterMode &mode, const Spinor &w) {
  // c Psi^dagger alpha Psi with alpha = tau1
  return 2.0 * mode.params.c * (std::conj(w(0)) * w(1)).real();
}

double ratio_or_zero(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

} // namespace

double density(const ScatterMode &mode, double x) {
  if (mode.theory == Theory::D)
    return mode.spinor(x).squaredNorm();
  return scalar_density(mode, mode.psi(x), step_value(mode, x));
}

double density_at(const ScatterMode &mode, Side side) {
  if (mode.theory == Theory::D)
    return mode.spinor_at(side).squaredNorm();
  return scalar_density(mode, mode.psi_at(side), step_value(mode, side));
}

namespace {

double tau3_form(const Spinor &fv) { return std::norm(fv(0)) - std::norm(fv(1)); }

} // namespace

double kfg_density_fv(const ScatterMode &mode, double x) {
  return tau3_form(fv_lift_value(mode.psi(x), mode.energy, step_value(mode, x),
                                 mode.params));
}

double kfg_density_fv_at(const ScatterMode &mode, Side side) {
  return tau3_form(fv_lift_value(mode.psi_at(side), mode.energy,
                                 step_value(mode, side), mode.params));
}

double current(const ScatterMode &mode, double x) {
  if (mode.theory == Theory::D)
    return spinor_current(mode, mode.spinor(x));
  const auto &p = mode.params;
  return p.hbar / p.mass * (std::conj(mode.psi(x)) * mode.psix(x)).imag();
}

double current_at(const ScatterMode &mode, Side side) {
  if (mode.theory == Theory::D)
    return spinor_current(mode, mode.spinor_at(side));
  const auto &p = mode.params;
  return p.hbar / p.mass *
         (std::conj(mode.psi_at(side)) * mode.psix_at(side)).imag();
}

DensityProbe probe_origin(const ScatterMode &mode) {
  return {mode.theory, density_at(mode, Side::left),
          density_at(mode, Side::right), current_at(mode, Side::left),
          current_at(mode, Side::right)};
}

double DensityJump::relative_residual() const {
  return ratio_or_zero(std::abs(value - predicted),
                       std::max(std::abs(value), std::abs(predicted)));
}

DensityJump kfg_density_jump(const ScatterMode &mode) {
  if (mode.theory != Theory::KFG)
    throw DomainError("wrong-theory", "density jump is defined for KFG modes");
  const double jump =
      density_at(mode, Side::right) - density_at(mode, Side::left);
  const double predicted =
      -mode.v0() / mode.params.rest_energy() * std::norm(mode.psi_at(Side::left));
  return {jump, predicted};
}

double mean_force_closed(const ScatterMode &mode) {
  if (mode.theory == Theory::KFG)
    return -0.5 * mode.v0() *
           (density_at(mode, Side::right) - density_at(mode, Side::left));
  return -mode.v0() * density_at(mode, Side::left);
}

double kfg_mean_force_scalar_form(const ScatterMode &mode) {
  if (mode.theory != Theory::KFG)
    throw DomainError("wrong-theory", "scalar form applies to KFG modes");
  const double v0 = mode.v0();
  return 0.5 * v0 * v0 / mode.params.rest_energy() *
         std::norm(mode.psi_at(Side::left));
}

DeltaIntegrals delta_conventions(const ScatterMode &mode) {
  const double left = density_at(mode, Side::left);
  const double right = density_at(mode, Side::right);
  return {0.5 * (right - left), 0.5 * (right + left), left, right};
}

MeanForceReport boundary_terms(const ScatterMode &mode) {
  const auto &p = mode.params;
  const double kin = -p.hbar * p.hbar / (2.0 * p.mass);
  const double mc2 = p.rest_energy();
  const double v0 = mode.v0();

  MeanForceReport rep{};
  rep.theory = mode.theory;
  rep.energy = mode.energy;
  rep.v0 = v0;
  rep.regime = mode.regime;
  rep.r = mode.r;
  rep.t = mode.t;
  rep.rho_left = density_at(mode, Side::left);
  rep.rho_right = density_at(mode, Side::right);
  rep.route_a = mean_force_closed(mode);
  rep.route_a_scalar_form = rep.route_a;
  rep.delta_integral = delta_conventions(mode);

  switch (mode.theory) {
  case Theory::S: {
    const double gl = std::norm(mode.psix_at(Side::left));
    const double gr = std::norm(mode.psix_at(Side::right));
    rep.route_c.kinetic_term = kin * (gr - gl);
    rep.route_c.potential_term = v0 * std::norm(mode.psi_at(Side::right));
    rep.kinetic_jump = ratio_or_zero(std::abs(gr - gl), std::max(gl, gr));
    break;
  }
  case Theory::D: {
    const auto beta = MatrixSet::standard().beta;
    const Spinor wl = mode.spinor_at(Side::left);
    const Spinor wr = mode.spinor_at(Side::right);
    const double bl = (wl.adjoint() * beta * wl)(0, 0).real();
    const double br = (wr.adjoint() * beta * wr)(0, 0).real();
    rep.route_c.mass_term = mc2 * (br - bl);
    rep.route_c.potential_term = v0 * wr.squaredNorm();
    break;
  }
  case Theory::KFG: {
    rep.route_a_scalar_form = kfg_mean_force_scalar_form(mode);
    const auto b = fv_lift(mode);
    const Mat2 one_plus_tau1 =
        Mat2::Identity() + MatrixSet::standard().tau1;
    const double kl =
        (b.psix_left.adjoint() * one_plus_tau1 * b.psix_left)(0, 0).real();
    const double kr =
        (b.psix_right.adjoint() * one_plus_tau1 * b.psix_right)(0, 0).real();
    rep.route_c.kinetic_term = kin * (kr - kl);
    rep.route_c.mass_term =
        mc2 * (b.psi_right.squaredNorm() - b.psi_left.squaredNorm());
    rep.route_c.potential_term = v0 * tau3_form(b.psi_right);
    rep.kinetic_jump = ratio_or_zero(std::abs(kr - kl), std::max(kl, kr));
    const double expected_mass = -0.5 * v0 * (rep.rho_right + rep.rho_left);
    rep.mass_term_residual = ratio_or_zero(
        std::abs(rep.route_c.mass_term - expected_mass),
        std::max(std::abs(rep.route_c.mass_term), std::abs(expected_mass)));
    break;
  }
  }

  const auto &c = rep.route_c;
  const double sum = c.kinetic_term + c.mass_term + c.potential_term + rep.route_a;
  const double scale = std::max({std::abs(c.kinetic_term), std::abs(c.mass_term),
                                 std::abs(c.potential_term), std::abs(rep.route_a)});
  rep.identity_residual = ratio_or_zero(std::abs(sum), scale);
  return rep;
}

} // namespace stepforce
