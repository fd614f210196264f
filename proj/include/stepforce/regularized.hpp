#pragma once

#include "stepforce/modes.hpp"

#include <algorithm>
#include <vector>

namespace stepforce {

struct SolverOptions {
  double half_length = 20.0; // model spans [-L, L]
  int resolution = 32;       // segments per epsilon inside the smoothing zone
};

//! Piecewise-constant approximation of a smoothed step. Each segment holds
//! the regularized potential evaluated at its midpoint; outside [-L, L] the
//! potential is exactly 0 (left) and V0 (right).
struct PiecewiseModel {
  Theory theory;
  double energy;
  RegularizedPotential potential;
  std::vector<double> boundaries; // n + 1 ordered points, -L .. L
  std::vector<double> values;     // n segment potentials
  double core_width;              // fine segments cover [-core, core]
  double core_spacing;

  const PhysicalParams &params() const { return potential.params(); }
  std::size_t segments() const { return values.size(); }
};

//! Throws DomainError("under-resolved") when the segments cannot resolve the
//! smoothing (fewer than 40 segments in [-5 eps, 5 eps], core spacing above
//! min(eps/8, wavelength/20)) or when L < 20 or L < 50 eps.
PiecewiseModel build_piecewise_model(Theory theory, double energy,
                                     const RegularizedPotential &potential,
                                     const SolverOptions &options = {});

//! Exact propagator of the state vector across `width` of constant
//! potential phi. The state is (psi, psi_x) for S and KFG and the Dirac
//! spinor for D. Unit determinant.
Mat2 segment_propagator(Theory theory, double energy, double phi, double width,
                        const PhysicalParams &params);

//! State vector of the plane wave e^{i kappa x} at x = 0.
Spinor plane_state(Theory theory, double energy, double phi, cplx kappa,
                   const PhysicalParams &params);

//! Numerical stationary scattering state of a piecewise model, unit incident
//! amplitude on the far left and purely outgoing (or decaying) on the right.
class NumericalMode {
public:
  NumericalMode(PiecewiseModel model, std::vector<Spinor> states, cplx k, cplx q,
                cplx r, cplx t);

  const PiecewiseModel &model() const { return model_; }
  Theory theory() const { return model_.theory; }
  double energy() const { return model_.energy; }
  cplx k() const { return k_; }
  cplx q() const { return q_; }
  cplx r() const { return r_; }
  cplx t() const { return t_; }

  //! Max of the continuity, flux and determinant defects.
  double defect() const { return std::max({continuity_defect_, flux_defect_, det_defect_}); }
  double continuity_defect() const { return continuity_defect_; }
  double flux_defect() const { return flux_defect_; }
  double det_defect() const { return det_defect_; }

  //! State vector anywhere; analytic asymptotic forms outside [-L, L].
  Spinor state(double x) const;
  cplx psi(double x) const { return state(x)(0); }
  //! Density with the smooth potential: S |psi|^2, KFG ((E - phi_eps)/mc^2)
  //! |psi|^2, D |Psi|^2.
  double density(double x) const;
  double current(double x) const;

  const std::vector<Spinor> &boundary_states() const { return states_; }

private:
  double current_of(const Spinor &s) const;

  PiecewiseModel model_;
  std::vector<Spinor> states_;
  cplx k_, q_, r_, t_;
  double continuity_defect_ = 0.0;
  double flux_defect_ = 0.0;
  double det_defect_ = 0.0;
};

//! Throws DomainError("below-threshold") for inadmissible E and
//! DomainError("under-resolved") for unresolved models.
NumericalMode solve_smooth_mode(Theory theory, double energy,
                                const RegularizedPotential &potential,
                                const SolverOptions &options = {});

struct RouteBResult {
  double value;            // -int phi_eps'(x) rho_eps(x) dx
  double quadrature_error; // relative, from two Gauss orders
  double defect;           // solver defect
};

RouteBResult route_b_force(Theory theory, double energy,
                           const RegularizedPotential &potential,
                           const SolverOptions &options = {});

struct ConvergenceSeries {
  Theory theory;
  double energy;
  double v0;
  Shape shape;
  std::vector<double> epsilons;
  std::vector<double> values;
  std::vector<double> defects;
};

//! Route B values over a decreasing epsilon list.
ConvergenceSeries route_b_series(Theory theory, double energy,
                                 const PhysicalParams &params, Shape shape,
                                 const std::vector<double> &epsilons,
                                 const SolverOptions &options = {});

struct Extrapolation {
  double limit;
  double order;
  double error_estimate; // |last Richardson correction|
};

//! Fits v(eps) = A + B eps^p through the last three points and returns A.
//! Throws DomainError("invalid-series") for fewer than three points or
//! epsilons that are not strictly decreasing, and DomainError
//! ("no-convergence") when successive differences change sign, grow, or give
//! an order outside [0.5, 3]. Trailing differences below 1e-7 of the values
//! count as converged: the last value is returned, with the order taken from
//! the points before saturation (NaN if fewer than three).
Extrapolation extrapolate(const std::vector<double> &epsilons,
                          const std::vector<double> &values);
inline Extrapolation extrapolate(const ConvergenceSeries &series) {
  return extrapolate(series.epsilons, series.values);
}

//! Effective interface jumps of a smooth KFG mode. The outer solution is
//! sampled at +-delta (outside the smoothing zone), continued to 0+- with
//! the exact propagator of the asymptotic region, and lifted to FV form.
struct JumpRecord {
  Spinor jump_psi;        // Psi(0+) - Psi(0-)
  Spinor jump_psix;       // Psi_x(0+) - Psi_x(0-)
  Spinor projected_psi;   // (tau3 + i tau2) jump_psi
  Spinor projected_psix;
  Spinor predicted_psi;   // (V0/2mc^2)[-1, 1] psi(0)
  Spinor predicted_psix;
  double ratio_psi;       // |projected| / |jump|
  double ratio_psix;
  double deviation_psi;   // |jump - predicted| / |predicted|
  double deviation_psix;
  cplx component_ratio;   // jump_psi(0) / jump_psi(1), -> -1
};

//! Throws DomainError("probe-inside-smoothing") for delta <= 3 eps.
JumpRecord jump_diagnostics(double energy,
                                       const RegularizedPotential &potential,
                                       double delta,
                                       const SolverOptions &options = {});

} // namespace stepforce
