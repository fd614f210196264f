#pragma once

#include "stepforce/modes.hpp"

namespace stepforce {

// Densities and currents of a stationary mode at t = 0. All values are per
// unit incident amplitude.

//! S: |psi|^2. KFG: ((E - phi)/mc^2)|psi|^2. D: Psi^dagger Psi.
double density(const ScatterMode &mode, double x);
double density_at(const ScatterMode &mode, Side side);

//! KFG density through the two-component route Psi^dagger tau3 Psi.
double kfg_density_fv(const ScatterMode &mode, double x);
double kfg_density_fv_at(const ScatterMode &mode, Side side);

//! S and KFG: (hbar/m) Im(psi* psi_x). D: c Psi^dagger alpha Psi.
double current(const ScatterMode &mode, double x);
double current_at(const ScatterMode &mode, Side side);

struct DensityProbe {
  Theory theory;
  double rho_left;
  double rho_right;
  double current_left;
  double current_right;
};

DensityProbe probe_origin(const ScatterMode &mode);

struct DensityJump {
  double value;     // rho(0+) - rho(0-)
  double predicted; // -(V0/mc^2)|psi(0)|^2

  double relative_residual() const;
};

DensityJump kfg_density_jump(const ScatterMode &mode);

//! Route A. S, D: -V0 rho(0). KFG: -(V0/2)[rho(0+) - rho(0-)].
double mean_force_closed(const ScatterMode &mode);

//! KFG only: +(V0^2 / 2mc^2)|psi(0)|^2.
double kfg_mean_force_scalar_form(const ScatterMode &mode);

struct DeltaIntegrals {
  double half_jump = 0.0;
  double midpoint = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
};

//! Candidate values of the integral of delta(x) rho(x).
DeltaIntegrals delta_conventions(const ScatterMode &mode);

struct RouteCTerms {
  double kinetic_term = 0.0;
  double mass_term = 0.0;
  double potential_term = 0.0;
};

//! Mean-force report of one mode. Route C terms come from one-sided data
//! of the mode; which terms exist depends on the theory:
//!   S:   kinetic -(hbar^2/2m)[|psi_x|^2], potential [phi rho]
//!   D:   mass mc^2[Psi^dagger beta Psi], potential [phi rho]
//!   KFG: kinetic -(hbar^2/2m)[Psi_x^dagger (1 + tau1) Psi_x],
//!        mass mc^2[Psi^dagger Psi], potential [phi rho]
//! with [g] = g(0+) - g(0-).
struct MeanForceReport {
  Theory theory;
  double energy;
  double v0;
  Regime regime;
  cplx r;
  cplx t;
  double rho_left;
  double rho_right;
  double route_a;
  double route_a_scalar_form; // KFG: (V0^2/2mc^2)|psi(0)|^2; equal to route_a otherwise
  RouteCTerms route_c;
  double identity_residual; // sum of route C terms + route_a, relative
  double mass_term_residual;    // KFG: mass term vs -(V0/2)(rho+ + rho-)
  double kinetic_jump;          // KFG: jump of Psi_x^dagger (1+tau1) Psi_x
  DeltaIntegrals delta_integral;
};

MeanForceReport boundary_terms(const ScatterMode &mode);

} // namespace stepforce
