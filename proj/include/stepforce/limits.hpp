#pragma once

#include "stepforce/regularized.hpp"

#include <string>
#include <vector>

namespace stepforce {

//! Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

struct NonrelRow {
  double c;
  double energy;       // mc^2 + E_nr
  double residual_density; // max over probes of |rho_KFG - (1 - phi/mc^2) rho_S| / rho_S
  double residual_force;   // |f_KFG - (V0^2/2mc^2) rho_S(0)| / |f_KFG|
  std::string tag;     // "ok", "not-nonrelativistic" or "degenerate"
};

struct NonrelTable {
  double e_nr;
  double v0;
  std::vector<NonrelRow> rows;
  double slope_density; // NaN with fewer than two "ok" rows
  double slope_force;
};

//! Pairs the KFG mode at E = mc^2 + E_nr with the S mode at E_nr for each c.
//! `params` supplies hbar, mass and V0; c is taken from the list.
NonrelTable nonrel_residuals(double e_nr, const std::vector<double> &c_list,
                             const PhysicalParams &params);

//! Probe positions; 0- and 0+ are one-sided.
struct Probe {
  double x;
  Side side; // consulted only when x == 0
};
const std::vector<Probe> &nonrel_probes();

struct InfiniteStepRow {
  double v0;
  double route_a;         // -V0 |psi(0)|^2
  double exact;           // -2 hbar^2 k^2 / m
  double identity_residual;
  double candidate;       // -(hbar^2/2m) |psi_x(0-)|^2
  double candidate_error; // |candidate - exact| / |exact|
};

struct InfiniteStepTable {
  double energy;
  std::vector<InfiniteStepRow> rows;
  std::vector<double> rejected; // V0 <= E
  double slope;                 // of candidate_error vs V0
};

//! Schroedinger modes below a tall step.
InfiniteStepTable infinite_step_sweep(double energy,
                                      const std::vector<double> &v0_list,
                                      const PhysicalParams &params);

struct WeakProductCheck {
  double epsilon;
  double window;
  cplx integral; // int_{-w}^{w} phi_eps psi_eps dx
  cplx target;   // -(hbar^2/2m) psi_x(0-) of the sharp mode at the same V0
  double deviation;
};

//! Throws DomainError("unresolved-window") for window <= eps.
WeakProductCheck weak_product_check(double energy,
                                   const RegularizedPotential &potential,
                                   double window,
                                   const SolverOptions &options = {});

} // namespace stepforce
