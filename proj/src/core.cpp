#include "stepforce/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stepforce {

PhysicalParams PhysicalParams::make(double hbar, double mass, double c,
                                    double v0) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(hbar) || !positive(mass) || !positive(c))
    throw DomainError("invalid-params",
                      "hbar, mass and c must be strictly positive");
  if (!std::isfinite(v0))
    throw DomainError("invalid-params", "v0 must be finite");
  return PhysicalParams{hbar, mass, c, v0};
}

PhysicalParams PhysicalParams::from_si(double hbar_si, double mass_si,
                                       double c_si, double v0_si) {
  const auto si = make(hbar_si, mass_si, c_si, v0_si);
  return natural(si.v0 / si.rest_energy());
}

PhysicalParams PhysicalParams::with_v0(double value) const {
  return make(hbar, mass, c, value);
}

PhysicalParams PhysicalParams::with_c(double value) const {
  return make(hbar, mass, value, v0);
}

double StepPotential::eval(double x) const {
  if (x == 0.0)
    throw DomainError("undefined-at-origin",
                      "the step potential is not defined at x = 0");
  return x > 0.0 ? params_.v0 : 0.0;
}

std::string_view to_string(Shape shape) {
  switch (shape) {
  case Shape::logistic:
    return "logistic";
  case Shape::error_function:
    return "erf";
  case Shape::linear_ramp:
    return "ramp";
  }
  return "unknown";
}

Shape shape_from_string(std::string_view name) {
  if (name == "logistic")
    return Shape::logistic;
  if (name == "erf" || name == "error-function")
    return Shape::error_function;
  if (name == "ramp" || name == "linear-ramp")
    return Shape::linear_ramp;
  throw ConfigError("unknown regularizer shape '" + std::string(name) + "'");
}

RegularizedPotential::RegularizedPotential(PhysicalParams params,
                                           double epsilon, Shape shape)
    : params_(params), epsilon_(epsilon), shape_(shape) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainError("invalid-width",
                      "regularization width must be positive");
}

double RegularizedPotential::eval(double x) const {
  const double v0 = params_.v0;
  const double s = x / epsilon_;
  switch (shape_) {
  case Shape::logistic:
    return v0 / (1.0 + std::exp(-s));
  case Shape::error_function:
    // erfc keeps full relative precision in both tails
    return s >= 0.0 ? v0 * (1.0 - 0.5 * std::erfc(s))
                    : 0.5 * v0 * std::erfc(-s);
  case Shape::linear_ramp:
    return v0 * std::clamp(0.5 * (s + 1.0), 0.0, 1.0);
  }
  return 0.0;
}

double RegularizedPotential::derivative(double x) const {
  const double v0 = params_.v0;
  const double s = x / epsilon_;
  switch (shape_) {
  case Shape::logistic: {
    const double e = std::exp(-std::abs(s));
    return v0 * e / (epsilon_ * (1.0 + e) * (1.0 + e));
  }
  case Shape::error_function:
    return v0 * std::exp(-s * s) / (epsilon_ * std::sqrt(std::numbers::pi));
  case Shape::linear_ramp:
    return std::abs(s) < 1.0 ? v0 / (2.0 * epsilon_) : 0.0;
  }
  return 0.0;
}

double RegularizedPotential::support_half_width() const {
  switch (shape_) {
  case Shape::logistic:
    return 40.0 * epsilon_;
  case Shape::error_function:
    return 7.0 * epsilon_;
  case Shape::linear_ramp:
    return epsilon_;
  }
  return epsilon_;
}

std::vector<double> grid_build(const GridSpec &spec) {
  if (spec.n_points < 2)
    throw ConfigError("grid needs at least two points");
  if (!(spec.x_min < spec.x_max))
    throw ConfigError("grid requires x_min < x_max");
  std::vector<double> x(static_cast<std::size_t>(spec.n_points));
  const double h = spec.spacing();
  for (int i = 0; i < spec.n_points; ++i)
    x[static_cast<std::size_t>(i)] = spec.x_min + i * h;
  x.back() = spec.x_max;
  return x;
}

} // namespace stepforce
