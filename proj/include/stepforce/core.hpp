#pragma once

#include "stepforce/errors.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace stepforce {

//! hbar, m, c and the step height V0. Defaults are natural units.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double c = 1.0;
  double v0 = 0.0;

  //! Validating constructor; throws DomainError("invalid-params") unless
  //! hbar, mass and c are strictly positive and finite.
  static PhysicalParams make(double hbar, double mass, double c, double v0);
  static PhysicalParams natural(double v0) { return make(1.0, 1.0, 1.0, v0); }

  //! Converts SI-style inputs to natural units: lengths in hbar/(m c),
  //! energies in m c^2. Only v0 carries over, rescaled.
  static PhysicalParams from_si(double hbar_si, double mass_si, double c_si,
                                double v0_si);

  bool natural_units() const {
    return hbar == 1.0 && mass == 1.0 && c == 1.0;
  }
  double rest_energy() const { return mass * c * c; }

  PhysicalParams with_v0(double value) const;
  PhysicalParams with_c(double value) const;
};

//! Selects the one-sided limit 0- (left) or 0+ (right) at the interface.
enum class Side { left, right };

//! phi(x) = V0 Theta(x). The value at x = 0 is deliberately undefined.
class StepPotential {
public:
  explicit StepPotential(PhysicalParams params) : params_(params) {}

  //! Throws DomainError("undefined-at-origin") for x == 0.
  double eval(double x) const;
  double one_sided(Side side) const {
    return side == Side::left ? 0.0 : params_.v0;
  }
  double v0() const { return params_.v0; }
  const PhysicalParams &params() const { return params_; }

private:
  PhysicalParams params_;
};

enum class Shape { logistic, error_function, linear_ramp };

std::string_view to_string(Shape shape);
//! Accepts "logistic", "erf"/"error-function", "ramp"/"linear-ramp".
Shape shape_from_string(std::string_view name);

//! Midpoint-symmetric smoothed step of width scale epsilon:
//!   logistic        V0 / (1 + exp(-x/eps))
//!   error_function  V0/2 (1 + erf(x/eps))
//!   linear_ramp     V0 (x + eps) / (2 eps) clamped to [0, V0]
//! derivative()/V0 is a regularized Dirac delta.
class RegularizedPotential {
public:
  //! Throws DomainError("invalid-width") for eps <= 0.
  RegularizedPotential(PhysicalParams params, double epsilon, Shape shape);

  double eval(double x) const;
  double derivative(double x) const;

  //! Half width beyond which |eval - step| < 1e-16 V0 (the ramp is exact).
  double support_half_width() const;

  double epsilon() const { return epsilon_; }
  Shape shape() const { return shape_; }
  double v0() const { return params_.v0; }
  const PhysicalParams &params() const { return params_; }

private:
  PhysicalParams params_;
  double epsilon_;
  Shape shape_;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 2;

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
};

//! Uniform points including both endpoints; throws ConfigError when
//! n_points < 2 or x_min >= x_max.
std::vector<double> grid_build(const GridSpec &spec);

} // namespace stepforce
