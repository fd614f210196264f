#include "stepforce/modes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

namespace stepforce {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool near_zero(double value, double scale) {
  return std::abs(value) <= 16.0 * kEps * scale;
}

// Plane-wave spinor of the default representation: (1, hbar c kappa /
// (E - phi + mc^2)), or (0, 1) at the lower threshold E - phi = -mc^2.
Spinor default_dirac_spinor(cplx kappa, double energy, double phi,
                            const PhysicalParams &p) {
  const double denom = energy - phi + p.rest_energy();
  if (near_zero(denom, std::abs(energy - phi) + p.rest_energy()))
    return Spinor(0.0, 1.0);
  return Spinor(1.0, p.hbar * p.c * kappa / denom);
}

// Null vector of hbar c kappa alpha + mc^2 beta + (phi - E), normalized to
// the norm of the default-representation spinor.
Spinor generic_dirac_spinor(cplx kappa, double energy, double phi,
                            const PhysicalParams &p, const MatrixSet &m) {
  const Mat2 op = p.hbar * p.c * kappa * m.alpha + p.rest_energy() * m.beta +
                  (phi - energy) * Mat2::Identity();
  Spinor w;
  if (op.row(0).norm() >= op.row(1).norm())
    w = Spinor(-op(0, 1), op(0, 0));
  else
    w = Spinor(-op(1, 1), op(1, 0));
  const double target = default_dirac_spinor(kappa, energy, phi, p).norm();
  return w * (target / w.norm());
}

} // namespace

Spinor dirac_plane_spinor(cplx kappa, double energy, double phi,
                          const PhysicalParams &params) {
  return default_dirac_spinor(kappa, energy, phi, params);
}

std::string_view to_string(Theory theory) {
  switch (theory) {
  case Theory::S:
    return "S";
  case Theory::KFG:
    return "KFG";
  case Theory::D:
    return "D";
  }
  return "?";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
  case Regime::propagating:
    return "propagating";
  case Regime::evanescent:
    return "evanescent";
  case Regime::klein:
    return "klein";
  case Regime::threshold:
    return "threshold";
  }
  return "?";
}

Theory theory_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "s")
    return Theory::S;
  if (lower == "kfg")
    return Theory::KFG;
  if (lower == "d")
    return Theory::D;
  throw ConfigError("unknown theory '" + std::string(name) +
                    "' (expected s, kfg or d)");
}

MatrixSet MatrixSet::standard() {
  MatrixSet m;
  m.tau1 << 0.0, 1.0, 1.0, 0.0;
  m.tau2 << 0.0, -I, I, 0.0;
  m.tau3 << 1.0, 0.0, 0.0, -1.0;
  m.alpha = m.tau1;
  m.beta = m.tau3;
  return m;
}

MatrixSet MatrixSet::conjugated(const Mat2 &unitary) const {
  MatrixSet m = *this;
  m.alpha = unitary * alpha * unitary.adjoint();
  m.beta = unitary * beta * unitary.adjoint();
  return m;
}

double MatrixSet::algebra_defect() const {
  const Mat2 one = Mat2::Identity();
  double d = (alpha * alpha - one).cwiseAbs().maxCoeff();
  d = std::max(d, (beta * beta - one).cwiseAbs().maxCoeff());
  d = std::max(d, (alpha * beta + beta * alpha).cwiseAbs().maxCoeff());
  d = std::max(d, (alpha - alpha.adjoint()).cwiseAbs().maxCoeff());
  d = std::max(d, (beta - beta.adjoint()).cwiseAbs().maxCoeff());
  return d;
}

double wavenumber_squared(Theory theory, double energy, double phi,
                          const PhysicalParams &p) {
  const double kinetic = energy - phi;
  if (theory == Theory::S)
    return 2.0 * p.mass * kinetic / (p.hbar * p.hbar);
  const double mc2 = p.rest_energy();
  const double hc = p.hbar * p.c;
  return (kinetic - mc2) * (kinetic + mc2) / (hc * hc);
}

Wavenumber dispersion(Theory theory, double energy, double phi,
                      const PhysicalParams &p) {
  const double kinetic = energy - phi;
  const double k2 = wavenumber_squared(theory, energy, phi, p);
  bool at_threshold;
  if (theory == Theory::S) {
    at_threshold = near_zero(kinetic, std::max(std::abs(energy), std::abs(phi)));
  } else {
    const double mc2 = p.rest_energy();
    at_threshold = near_zero(kinetic * kinetic - mc2 * mc2,
                             std::max(kinetic * kinetic, mc2 * mc2));
  }
  if (at_threshold)
    return {cplx(0.0, 0.0), Regime::threshold};
  if (k2 > 0.0) {
    const double root = std::sqrt(k2);
    if (theory != Theory::S && kinetic < 0.0)
      return {cplx(-root, 0.0), Regime::klein};
    return {cplx(root, 0.0), Regime::propagating};
  }
  return {cplx(0.0, std::sqrt(-k2)), Regime::evanescent};
}

Spinor ScatterMode::spinor_left(double x) const {
  return std::exp(I * k * x) * w_in + r * std::exp(-I * k * x) * w_ref;
}

Spinor ScatterMode::spinor_right(double x) const {
  return t * std::exp(I * q * x) * w_tr;
}

Spinor ScatterMode::spinorx_left(double x) const {
  return I * k * (std::exp(I * k * x) * w_in - r * std::exp(-I * k * x) * w_ref);
}

Spinor ScatterMode::spinorx_right(double x) const {
  return I * q * t * std::exp(I * q * x) * w_tr;
}

cplx ScatterMode::psi_left(double x) const { return spinor_left(x)(0); }
cplx ScatterMode::psi_right(double x) const { return spinor_right(x)(0); }
cplx ScatterMode::psix_left(double x) const { return spinorx_left(x)(0); }
cplx ScatterMode::psix_right(double x) const { return spinorx_right(x)(0); }

cplx ScatterMode::psixx_left(double x) const {
  return -k * k *
         (std::exp(I * k * x) * w_in(0) + r * std::exp(-I * k * x) * w_ref(0));
}

cplx ScatterMode::psixx_right(double x) const {
  return -q * q * t * std::exp(I * q * x) * w_tr(0);
}

cplx ScatterMode::psi(double x) const {
  if (x == 0.0)
    throw DomainError("undefined-at-origin",
                      "use psi_at(Side) for one-sided values at x = 0");
  return x < 0.0 ? psi_left(x) : psi_right(x);
}

cplx ScatterMode::psix(double x) const {
  if (x == 0.0)
    throw DomainError("undefined-at-origin",
                      "use psix_at(Side) for one-sided values at x = 0");
  return x < 0.0 ? psix_left(x) : psix_right(x);
}

Spinor ScatterMode::spinor(double x) const {
  if (x == 0.0)
    throw DomainError("undefined-at-origin",
                      "use spinor_at(Side) for one-sided values at x = 0");
  return x < 0.0 ? spinor_left(x) : spinor_right(x);
}

namespace {

void require_incidence(Theory theory, double energy, const PhysicalParams &p) {
  const auto left = dispersion(theory, energy, 0.0, p);
  if (left.regime == Regime::propagating && left.value.real() > 0.0)
    return;
  if (theory == Theory::S)
    throw DomainError("below-threshold",
                      "S incidence requires E > 0 (got E = " +
                          std::to_string(energy) + ")");
  throw DomainError("below-threshold",
                    std::string(to_string(theory)) +
                        " incidence requires E > mc^2 (got E = " +
                        std::to_string(energy) +
                        ", mc^2 = " + std::to_string(p.rest_energy()) + ")");
}

} // namespace

ScatterMode solve_step_mode(Theory theory, double energy,
                            const PhysicalParams &p) {
  require_incidence(theory, energy, p);
  const auto left = dispersion(theory, energy, 0.0, p);
  const auto right = dispersion(theory, energy, p.v0, p);

  ScatterMode mode{theory, energy, left.value, right.value, 0.0, 1.0,
                   right.regime, p};
  if (theory != Theory::D) {
    const cplx sum = mode.k + mode.q;
    if (sum == 0.0)
      throw DomainError("singular-matching", "k + q = 0: matching is singular");
    mode.r = (mode.k - mode.q) / sum;
    mode.t = 2.0 * mode.k / sum;
    return mode;
  }

  const double hc = p.hbar * p.c;
  const double mc2 = p.rest_energy();
  const double lambda = hc * mode.k.real() / (energy + mc2);
  mode.w_in = Spinor(1.0, lambda);
  mode.w_ref = Spinor(1.0, -lambda);
  mode.w_tr = default_dirac_spinor(mode.q, energy, p.v0, p);
  if (mode.w_tr(0) == 0.0) {
    // lower threshold E - V0 = -mc^2: continuity forces psi_1(0) = 0
    mode.r = -1.0;
    mode.t = 2.0 * lambda;
    return mode;
  }
  const cplx lambda_prime = mode.w_tr(1);
  mode.r = (lambda - lambda_prime) / (lambda + lambda_prime);
  mode.t = 1.0 + mode.r;
  return mode;
}

ScatterMode solve_dirac_generic(double energy, const PhysicalParams &p,
                                const MatrixSet &matrices) {
  require_incidence(Theory::D, energy, p);
  const auto left = dispersion(Theory::D, energy, 0.0, p);
  const auto right = dispersion(Theory::D, energy, p.v0, p);
  ScatterMode mode{Theory::D, energy, left.value, right.value, 0.0, 1.0,
                   right.regime, p};
  mode.w_in = generic_dirac_spinor(mode.k, energy, 0.0, p, matrices);
  mode.w_ref = generic_dirac_spinor(-mode.k, energy, 0.0, p, matrices);
  mode.w_tr = generic_dirac_spinor(mode.q, energy, p.v0, p, matrices);
  // w_in + r w_ref = t w_tr
  Mat2 system;
  system.col(0) = mode.w_ref;
  system.col(1) = -mode.w_tr;
  const Spinor coeffs = system.partialPivLu().solve(-mode.w_in);
  mode.r = coeffs(0);
  mode.t = coeffs(1);
  return mode;
}

Spinor fv_lift_value(cplx psi, double energy, double phi,
                     const PhysicalParams &p) {
  const double a = (energy - phi) / p.rest_energy();
  return Spinor(0.5 * (1.0 + a) * psi, 0.5 * (1.0 - a) * psi);
}

FVBoundary fv_lift(const ScatterMode &mode) {
  if (mode.theory != Theory::KFG)
    throw DomainError("wrong-theory", "fv_lift needs a KFG mode");
  const auto &p = mode.params;
  FVBoundary b;
  b.psi0 = mode.psi_left(0.0);
  b.psix0 = mode.psix_left(0.0);
  b.psi_left = fv_lift_value(mode.psi_left(0.0), mode.energy, 0.0, p);
  b.psi_right = fv_lift_value(mode.psi_right(0.0), mode.energy, p.v0, p);
  b.psix_left = fv_lift_value(mode.psix_left(0.0), mode.energy, 0.0, p);
  b.psix_right = fv_lift_value(mode.psix_right(0.0), mode.energy, p.v0, p);
  return b;
}

double BoundaryResiduals::max() const {
  return std::max({psi_jump, psix_jump, psi_projected, psix_projected});
}

BoundaryResiduals bc_residuals(const FVBoundary &b, const PhysicalParams &p) {
  const auto matrices = MatrixSet::standard();
  const Mat2 proj = matrices.projector();
  const Spinor direction =
      0.5 * p.v0 / p.rest_energy() * Spinor(-1.0, 1.0);
  const double scale = std::max(1.0, std::abs(b.psi0));
  const double scale_x = std::max(1.0, std::abs(b.psix0));

  const Spinor jump = b.psi_right - b.psi_left;
  const Spinor jump_x = b.psix_right - b.psix_left;
  BoundaryResiduals res;
  res.psi_jump = (jump - direction * b.psi0).cwiseAbs().maxCoeff() / scale;
  res.psix_jump = (jump_x - direction * b.psix0).cwiseAbs().maxCoeff() / scale_x;
  res.psi_projected = (proj * jump).cwiseAbs().maxCoeff() / scale;
  res.psix_projected = (proj * jump_x).cwiseAbs().maxCoeff() / scale_x;
  return res;
}

double fv_system_residual(const ScatterMode &mode, double x) {
  if (mode.theory != Theory::KFG)
    throw DomainError("wrong-theory", "the coupled FV system needs a KFG mode");
  if (x == 0.0)
    throw DomainError("undefined-at-origin",
                      "the FV system is evaluated off the interface");
  const auto &p = mode.params;
  const double phi = x > 0.0 ? p.v0 : 0.0;
  const cplx psi = mode.psi(x);
  const cplx psixx = x < 0.0 ? mode.psixx_left(x) : mode.psixx_right(x);
  const Spinor fv = fv_lift_value(psi, mode.energy, phi, p);
  const double mc2 = p.rest_energy();
  const cplx kinetic = p.hbar * p.hbar / (2.0 * p.mass) * psixx;

  // E phi = -(hbar^2/2m)(phi + chi)'' + V phi + mc^2 phi
  // E chi = +(hbar^2/2m)(phi + chi)'' + V chi - mc^2 chi
  const cplx top = mode.energy * fv(0) - (-kinetic + phi * fv(0) + mc2 * fv(0));
  const cplx bottom = mode.energy * fv(1) - (kinetic + phi * fv(1) - mc2 * fv(1));
  const double scale = std::max(
      {std::abs(mode.energy) * fv.cwiseAbs().maxCoeff(), std::abs(kinetic),
       std::abs(phi) * fv.cwiseAbs().maxCoeff(), mc2 * fv.cwiseAbs().maxCoeff()});
  if (scale == 0.0)
    return 0.0;
  return std::max(std::abs(top), std::abs(bottom)) / scale;
}

double RepresentationComparison::max_difference() const {
  return std::max({std::abs(r2_default - r2_alternate),
                   std::abs(t2_default - t2_alternate),
                   std::abs(rho_default - rho_alternate)});
}

RepresentationComparison representation_swap_check(double energy,
                                                   const PhysicalParams &p,
                                                   const MatrixSet &alternate) {
  if (alternate.algebra_defect() > 1e-12)
    throw DomainError("invalid-representation",
                      "alternate matrices violate the Dirac algebra");
  const auto a = solve_dirac_generic(energy, p, MatrixSet::standard());
  const auto b = solve_dirac_generic(energy, p, alternate);
  RepresentationComparison cmp;
  cmp.r2_default = std::norm(a.r);
  cmp.r2_alternate = std::norm(b.r);
  cmp.t2_default = std::norm(a.t);
  cmp.t2_alternate = std::norm(b.t);
  cmp.rho_default = a.spinor_left(0.0).squaredNorm();
  cmp.rho_alternate = b.spinor_left(0.0).squaredNorm();
  return cmp;
}

} // namespace stepforce
