#pragma once

#include "stepforce/core.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace stepforce {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

enum class Theory { S, KFG, D };
enum class Regime { propagating, evanescent, klein, threshold };

std::string_view to_string(Theory theory);
std::string_view to_string(Regime regime);
//! Accepts "s", "kfg", "d" in any case.
Theory theory_from_string(std::string_view name);

//! Feshbach-Villars tau matrices and a 2x2 Dirac representation.
struct MatrixSet {
  Mat2 tau1, tau2, tau3;
  Mat2 alpha, beta;

  //! alpha = tau1, beta = tau3.
  static MatrixSet standard();
  //! Same tau matrices, alpha and beta replaced by U alpha U^dagger etc.
  MatrixSet conjugated(const Mat2 &unitary) const;

  //! Largest deviation from alpha^2 = beta^2 = 1, {alpha, beta} = 0 and
  //! hermiticity of alpha and beta.
  double algebra_defect() const;

  //! tau3 + i tau2, the projector combination that stays continuous.
  Mat2 projector() const { return tau3 + cplx(0.0, 1.0) * tau2; }
};

struct Wavenumber {
  cplx value;
  Regime regime;
};

//! K^2 for a region of constant potential phi:
//!   S:     2 m (E - phi) / hbar^2
//!   KFG/D: ((E - phi)^2 - (m c^2)^2) / (hbar c)^2
double wavenumber_squared(Theory theory, double energy, double phi,
                          const PhysicalParams &params);

//! Wavenumber in a region of constant potential phi. Real K^2 > 0 gives a
//! real value whose sign follows the group velocity (negative in the Klein
//! zone E - phi < -mc^2); K^2 < 0 gives i kappa with kappa > 0; K^2 = 0 (to
//! rounding) is tagged threshold with value 0.
Wavenumber dispersion(Theory theory, double energy, double phi,
                      const PhysicalParams &params);

//! Default-representation Dirac spinor of e^{i kappa x} in a region of
//! potential phi: (1, hbar c kappa / (E - phi + mc^2)), or (0, 1) at the
//! lower threshold E - phi = -mc^2.
Spinor dirac_plane_spinor(cplx kappa, double energy, double phi,
                          const PhysicalParams &params);

//! Exact stationary scattering state of the sharp step, incident from the
//! left with unit amplitude:
//!   x < 0:  e^{ikx} w_in + r e^{-ikx} w_ref
//!   x > 0:  t e^{iqx} w_tr
//! For S and KFG the spinors are trivially 1 and the state is the scalar psi.
struct ScatterMode {
  Theory theory;
  double energy;
  cplx k;
  cplx q;
  cplx r;
  cplx t;
  Regime regime;
  PhysicalParams params;
  // Dirac only: upper/lower plane-wave spinors.
  Spinor w_in = Spinor(1.0, 0.0);
  Spinor w_ref = Spinor(1.0, 0.0);
  Spinor w_tr = Spinor(1.0, 0.0);

  double v0() const { return params.v0; }

  // Analytic forms of the left and right regions; both may be evaluated
  // anywhere, which is how one-sided limits at 0-/0+ are taken.
  cplx psi_left(double x) const;
  cplx psi_right(double x) const;
  cplx psix_left(double x) const;
  cplx psix_right(double x) const;
  cplx psixx_left(double x) const;
  cplx psixx_right(double x) const;
  Spinor spinor_left(double x) const;
  Spinor spinor_right(double x) const;
  Spinor spinorx_left(double x) const;
  Spinor spinorx_right(double x) const;

  //! Region chosen by the sign of x; throws DomainError for x == 0.
  cplx psi(double x) const;
  cplx psix(double x) const;
  Spinor spinor(double x) const;

  cplx psi_at(Side side) const {
    return side == Side::left ? psi_left(0.0) : psi_right(0.0);
  }
  cplx psix_at(Side side) const {
    return side == Side::left ? psix_left(0.0) : psix_right(0.0);
  }
  Spinor spinor_at(Side side) const {
    return side == Side::left ? spinor_left(0.0) : spinor_right(0.0);
  }
};

//! Sharp-step matching. Throws DomainError("below-threshold") when the
//! energy does not allow a propagating incident wave on the left.
ScatterMode solve_step_mode(Theory theory, double energy,
                            const PhysicalParams &params);

//! Dirac matching solved as a 2x2 linear system with plane-wave spinors
//! taken as null vectors of the given representation. Used to check the
//! closed form and representation independence.
ScatterMode solve_dirac_generic(double energy, const PhysicalParams &params,
                                const MatrixSet &matrices);

//! Two-component FV values on both sides of x = 0 (time factor stripped).
struct FVBoundary {
  cplx psi0;
  cplx psix0;
  Spinor psi_left;
  Spinor psi_right;
  Spinor psix_left;
  Spinor psix_right;
};

//! Stationary lift Psi = 1/2 [(1 + a) psi, (1 - a) psi], a = (E - phi)/mc^2,
//! applied separately to the left and right analytic forms.
FVBoundary fv_lift(const ScatterMode &mode);

//! Lift of scalar data at one point with potential phi.
Spinor fv_lift_value(cplx psi, double energy, double phi,
                     const PhysicalParams &params);

struct BoundaryResiduals {
  double psi_jump = 0.0;      // Psi(0+) - Psi(0-) - (V0/2mc^2)[-1, 1] psi(0)
  double psix_jump = 0.0;     // same for Psi_x
  double psi_projected = 0.0; // (tau3 + i tau2)(Psi(0+) - Psi(0-))
  double psix_projected = 0.0;

  double max() const;
};

//! Max-norm residuals of the matricial boundary conditions.
BoundaryResiduals bc_residuals(const FVBoundary &boundary,
                               const PhysicalParams &params);

//! Larger of the two coupled first-order FV equations' defects at x != 0,
//! relative to the largest term appearing in them.
double fv_system_residual(const ScatterMode &mode, double x);

struct RepresentationComparison {
  double r2_default = 0.0;
  double r2_alternate = 0.0;
  double t2_default = 0.0;
  double t2_alternate = 0.0;
  double rho_default = 0.0;
  double rho_alternate = 0.0;

  double max_difference() const;
};

//! Throws DomainError("invalid-representation") when `alternate` violates
//! the Dirac algebra.
RepresentationComparison representation_swap_check(double energy,
                                                   const PhysicalParams &params,
                                                   const MatrixSet &alternate);

} // namespace stepforce
