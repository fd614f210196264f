#include "stepforce/regularized.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace stepforce {

namespace {

constexpr cplx I{0.0, 1.0};

double largest_wavenumber_squared(Theory theory, double energy,
                                  const PhysicalParams &p) {
  double k2 = std::max(std::abs(wavenumber_squared(theory, energy, 0.0, p)),
                       std::abs(wavenumber_squared(theory, energy, p.v0, p)));
  if (theory != Theory::S && energy >= std::min(0.0, p.v0) &&
      energy <= std::max(0.0, p.v0))
    k2 = std::max(k2, std::abs(wavenumber_squared(theory, energy, energy, p)));
  return k2;
}

void append_uniform(std::vector<double> &points, double from, double to,
                    double max_width) {
  const auto n = static_cast<long>(std::ceil((to - from) / max_width - 1e-9));
  const long count = std::max(1L, n);
  for (long i = 1; i <= count; ++i)
    points.push_back(i == count ? to : from + (to - from) * i / count);
}

} // namespace

PiecewiseModel build_piecewise_model(Theory theory, double energy,
                                     const RegularizedPotential &potential,
                                     const SolverOptions &options) {
  const auto &p = potential.params();
  const double eps = potential.epsilon();
  const double L = options.half_length;
  if (L < 20.0 || L < 50.0 * eps)
    throw DomainError("under-resolved",
                      "model half length must satisfy L >= 20 and L >= 50 eps");
  if (options.resolution < 8)
    throw DomainError("under-resolved",
                      "at least 8 segments per epsilon are required");

  const double k2max = largest_wavenumber_squared(theory, energy, p);
  const double wavelength =
      k2max > 0.0 ? 2.0 * std::numbers::pi / std::sqrt(k2max) : L;
  const double core_spacing =
      std::min(eps / options.resolution, wavelength / 20.0);
  const double outer_spacing = std::min(wavelength / 20.0, L / 50.0);
  const double core = potential.support_half_width();

  PiecewiseModel model{theory, energy, potential, {}, {}, core, 0.0};
  auto &b = model.boundaries;
  b.push_back(-L);
  append_uniform(b, -L, -core, outer_spacing);
  const std::size_t core_begin = b.size() - 1;
  append_uniform(b, -core, core, core_spacing);
  model.core_spacing = b[core_begin + 1] - b[core_begin];
  append_uniform(b, core, L, outer_spacing);

  // 40 segments inside [-5 eps, 5 eps] and spacing <= min(eps/8, lambda/20)
  if (10.0 * eps / model.core_spacing < 40.0 - 1e-9 ||
      model.core_spacing > std::min(eps / 8.0, wavelength / 20.0) * (1 + 1e-9))
    throw DomainError("under-resolved", "smoothing zone is not resolved");

  model.values.reserve(b.size() - 1);
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    model.values.push_back(potential.eval(0.5 * (b[i] + b[i + 1])));
  return model;
}

Mat2 segment_propagator(Theory theory, double energy, double phi, double width,
                        const PhysicalParams &p) {
  const double k2 = wavenumber_squared(theory, energy, phi, p);
  const cplx K = std::sqrt(cplx(k2, 0.0));
  cplx C, S;
  if (std::abs(K * width) < 1e-3) {
    const double z2 = k2 * width * width;
    C = 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0;
    S = width * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0);
  } else {
    C = std::cos(K * width);
    S = std::sin(K * width) / K;
  }
  Mat2 generator;
  if (theory == Theory::D) {
    const double mc2 = p.rest_energy();
    const cplx f = I / (p.hbar * p.c);
    generator << 0.0, f * (energy - phi + mc2), f * (energy - phi - mc2), 0.0;
  } else {
    generator << 0.0, 1.0, -k2, 0.0;
  }
  return C * Mat2::Identity() + S * generator;
}

Spinor plane_state(Theory theory, double energy, double phi, cplx kappa,
                   const PhysicalParams &p) {
  if (theory == Theory::D)
    return dirac_plane_spinor(kappa, energy, phi, p);
  return Spinor(1.0, I * kappa);
}

NumericalMode::NumericalMode(PiecewiseModel model, std::vector<Spinor> states,
                             cplx k, cplx q, cplx r, cplx t)
    : model_(std::move(model)), states_(std::move(states)), k_(k), q_(q), r_(r),
      t_(t) {
  const auto &p = model_.params();
  const auto &b = model_.boundaries;
  const double incident =
      std::abs(current_of(plane_state(theory(), energy(), 0.0, k_, p)));
  const double j0 = current_of(states_.front());
  cplx det = 1.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const Mat2 prop =
        segment_propagator(theory(), energy(), model_.values[i], b[i + 1] - b[i], p);
    det *= prop.determinant();
    const double scale = std::max(states_[i].norm(), states_[i + 1].norm());
    if (scale > 0.0)
      continuity_defect_ = std::max(
          continuity_defect_, (prop * states_[i] - states_[i + 1]).norm() / scale);
    flux_defect_ = std::max(flux_defect_,
                            std::abs(current_of(states_[i + 1]) - j0) / incident);
  }
  det_defect_ = std::abs(det - 1.0);
}

double NumericalMode::current_of(const Spinor &s) const {
  const auto &p = model_.params();
  if (theory() == Theory::D)
    return 2.0 * p.c * (std::conj(s(0)) * s(1)).real();
  return p.hbar / p.mass * (std::conj(s(0)) * s(1)).imag();
}

Spinor NumericalMode::state(double x) const {
  const auto &p = model_.params();
  const auto &b = model_.boundaries;
  if (x < b.front())
    return std::exp(I * k_ * x) * plane_state(theory(), energy(), 0.0, k_, p) +
           r_ * std::exp(-I * k_ * x) * plane_state(theory(), energy(), 0.0, -k_, p);
  if (x > b.back())
    return t_ * std::exp(I * q_ * x) *
           plane_state(theory(), energy(), p.v0, q_, p);
  auto it = std::upper_bound(b.begin(), b.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(b.begin(), it));
  i = std::clamp<std::size_t>(i, 1, model_.segments()) - 1;
  return segment_propagator(theory(), energy(), model_.values[i], x - b[i], p) *
         states_[i];
}

double NumericalMode::density(double x) const {
  const Spinor s = state(x);
  switch (theory()) {
  case Theory::S:
    return std::norm(s(0));
  case Theory::KFG:
    return (energy() - model_.potential.eval(x)) / model_.params().rest_energy() *
           std::norm(s(0));
  case Theory::D:
    return s.squaredNorm();
  }
  return 0.0;
}

double NumericalMode::current(double x) const { return current_of(state(x)); }

NumericalMode solve_smooth_mode(Theory theory, double energy,
                                const RegularizedPotential &potential,
                                const SolverOptions &options) {
  const auto &p = potential.params();
  // admissibility and asymptotic wavenumbers come from the sharp problem
  const ScatterMode sharp = solve_step_mode(theory, energy, p);
  auto model = build_piecewise_model(theory, energy, potential, options);
  const auto &b = model.boundaries;
  const std::size_t n = model.segments();

  // Backward sweep from the outgoing state at x = L, renormalizing per
  // segment; log_scale[i] is the accumulated log of the dropped norms.
  std::vector<Spinor> states(n + 1);
  std::vector<double> log_scale(n + 1, 0.0);
  states[n] = plane_state(theory, energy, p.v0, sharp.q, p);
  for (std::size_t i = n; i-- > 0;) {
    Spinor s = segment_propagator(theory, energy, model.values[i],
                                  -(b[i + 1] - b[i]), p) *
               states[i + 1];
    const double norm = s.cwiseAbs().maxCoeff();
    states[i] = s / norm;
    log_scale[i] = log_scale[i + 1] + std::log(norm);
  }

  const double x0 = b.front();
  const cplx k = sharp.k;
  Mat2 basis;
  basis.col(0) = std::exp(I * k * x0) * plane_state(theory, energy, 0.0, k, p);
  basis.col(1) = std::exp(-I * k * x0) * plane_state(theory, energy, 0.0, -k, p);
  const Spinor coeffs = basis.partialPivLu().solve(states[0]);
  const cplx incoming = coeffs(0);
  const cplx r = coeffs(1) / incoming;
  // t e^{iqL} = 1 in the unscaled sweep
  const cplx t = std::exp(-I * sharp.q * b.back() - log_scale[0]) / incoming;

  for (std::size_t i = 0; i <= n; ++i)
    states[i] *= std::exp(log_scale[i] - log_scale[0]) / incoming;
  return NumericalMode(std::move(model), std::move(states), k, sharp.q, r, t);
}

RouteBResult route_b_force(Theory theory, double energy,
                           const RegularizedPotential &potential,
                           const SolverOptions &options) {
  const auto mode = solve_smooth_mode(theory, energy, potential, options);
  const auto &model = mode.model();
  const auto &b = model.boundaries;
  const auto &p = model.params();
  const double core = model.core_width;

  double coarse = 0.0;
  double fine = 0.0;
  for (std::size_t i = 0; i < model.segments(); ++i) {
    if (b[i + 1] <= -core || b[i] >= core)
      continue;
    const Spinor start = mode.boundary_states()[i];
    const double phi = model.values[i];
    const double left = b[i];
    auto integrand = [&](double x) {
      const Spinor s =
          segment_propagator(theory, energy, phi, x - left, p) * start;
      double rho = 0.0;
      switch (theory) {
      case Theory::S:
        rho = std::norm(s(0));
        break;
      case Theory::KFG:
        rho = (energy - potential.eval(x)) / p.rest_energy() * std::norm(s(0));
        break;
      case Theory::D:
        rho = s.squaredNorm();
        break;
      }
      return -potential.derivative(x) * rho;
    };
    coarse += boost::math::quadrature::gauss<double, 10>::integrate(
        integrand, b[i], b[i + 1]);
    fine += boost::math::quadrature::gauss<double, 15>::integrate(
        integrand, b[i], b[i + 1]);
  }
  const double err = fine == 0.0 ? 0.0 : std::abs(fine - coarse) / std::abs(fine);
  return {fine, err, mode.defect()};
}

ConvergenceSeries route_b_series(Theory theory, double energy,
                                 const PhysicalParams &params, Shape shape,
                                 const std::vector<double> &epsilons,
                                 const SolverOptions &options) {
  if (epsilons.empty())
    throw ConfigError("epsilon list is empty");
  ConvergenceSeries series{theory, energy, params.v0, shape, epsilons, {}, {}};
  for (double eps : epsilons) {
    const RegularizedPotential potential(params, eps, shape);
    const auto res = route_b_force(theory, energy, potential, options);
    series.values.push_back(res.value);
    series.defects.push_back(res.defect);
  }
  return series;
}

namespace {

[[noreturn]] void no_convergence(const std::vector<double> &eps,
                                 const std::vector<double> &values,
                                 const std::string &why) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "no convergence (" << why << "):";
  for (std::size_t i = 0; i < eps.size(); ++i)
    msg << " [" << eps[i] << ", " << values[i] << "]";
  throw DomainError("no-convergence", msg.str());
}

} // namespace

Extrapolation extrapolate(const std::vector<double> &eps,
                          const std::vector<double> &values) {
  if (eps.size() != values.size() || eps.size() < 3)
    throw DomainError("invalid-series",
                      "extrapolation needs at least three (eps, value) pairs");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || (i > 0 && !(eps[i] < eps[i - 1])))
      throw DomainError("invalid-series",
                        "epsilons must be positive and strictly decreasing");
  }

  std::vector<double> diff;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    diff.push_back(values[i + 1] - values[i]);
  if (std::all_of(diff.begin(), diff.end(), [](double d) { return d == 0.0; }))
    return {values.back(), std::numeric_limits<double>::quiet_NaN(), 0.0};

  // Saturated tail: once the differences sink to the mesh noise (~1e-7)
  // the last value is the limit; the order comes from the clean head.
  double scale = 0.0;
  for (double v : values)
    scale = std::max(scale, std::abs(v));
  const double floor = 1e-7 * scale;
  std::size_t clean = diff.size();
  while (clean > 0 && std::abs(diff[clean - 1]) <= floor)
    --clean;
  if (clean < diff.size()) {
    double tail = 0.0;
    for (std::size_t i = clean; i < diff.size(); ++i)
      tail = std::max(tail, std::abs(diff[i]));
    double order = std::numeric_limits<double>::quiet_NaN();
    if (clean >= 2) {
      const std::size_t m = clean + 1; // points feeding the clean differences
      order = extrapolate(std::vector<double>(eps.begin(), eps.begin() + m),
                          std::vector<double>(values.begin(), values.begin() + m))
                  .order;
    }
    return {values.back(), order, tail};
  }

  for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
    if (diff[i] == 0.0 || std::signbit(diff[i]) != std::signbit(diff[i + 1]))
      no_convergence(eps, values, "differences change sign");
    if (std::abs(diff[i + 1]) >= std::abs(diff[i]))
      no_convergence(eps, values, "differences do not shrink");
  }

  const std::size_t n = eps.size();
  const double e1 = eps[n - 3], e2 = eps[n - 2], e3 = eps[n - 1];
  const double ratio = diff[n - 3] / diff[n - 2];
  auto model_ratio = [&](double p) {
    return (std::pow(e1, p) - std::pow(e2, p)) / (std::pow(e2, p) - std::pow(e3, p));
  };
  double lo = 1e-3, hi = 20.0;
  if ((model_ratio(lo) - ratio) * (model_ratio(hi) - ratio) > 0.0)
    no_convergence(eps, values, "difference ratio admits no power law");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((model_ratio(lo) - ratio) * (model_ratio(mid) - ratio) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  const double order = 0.5 * (lo + hi);
  if (order < 0.5 || order > 3.0)
    no_convergence(eps, values, "fitted order " + std::to_string(order) +
                                    " outside [0.5, 3]");
  const double coeff =
      diff[n - 2] / (std::pow(e3, order) - std::pow(e2, order));
  const double correction = coeff * std::pow(e3, order);
  return {values.back() - correction, order, std::abs(correction)};
}

JumpRecord jump_diagnostics(double energy,
                                       const RegularizedPotential &potential,
                                       double delta,
                                       const SolverOptions &options) {
  const double eps = potential.epsilon();
  if (delta <= 3.0 * eps)
    throw DomainError("probe-inside-smoothing",
                      "probe offset must exceed 3 eps");
  const auto &p = potential.params();
  const auto mode = solve_smooth_mode(Theory::KFG, energy, potential, options);

  const Spinor right = segment_propagator(Theory::KFG, energy, p.v0, -delta, p) *
                       mode.state(delta);
  const Spinor left = segment_propagator(Theory::KFG, energy, 0.0, delta, p) *
                      mode.state(-delta);

  const Spinor psi_r = fv_lift_value(right(0), energy, p.v0, p);
  const Spinor psi_l = fv_lift_value(left(0), energy, 0.0, p);
  const Spinor psix_r = fv_lift_value(right(1), energy, p.v0, p);
  const Spinor psix_l = fv_lift_value(left(1), energy, 0.0, p);

  const Mat2 proj = MatrixSet::standard().projector();
  const Spinor direction = 0.5 * p.v0 / p.rest_energy() * Spinor(-1.0, 1.0);

  JumpRecord rec;
  rec.jump_psi = psi_r - psi_l;
  rec.jump_psix = psix_r - psix_l;
  rec.projected_psi = proj * rec.jump_psi;
  rec.projected_psix = proj * rec.jump_psix;
  rec.predicted_psi = direction * left(0);
  rec.predicted_psix = direction * left(1);
  auto ratio = [](const Spinor &a, const Spinor &b) {
    return b.norm() == 0.0 ? 0.0 : a.norm() / b.norm();
  };
  rec.ratio_psi = ratio(rec.projected_psi, rec.jump_psi);
  rec.ratio_psix = ratio(rec.projected_psix, rec.jump_psix);
  rec.deviation_psi = ratio(rec.jump_psi - rec.predicted_psi, rec.predicted_psi);
  rec.deviation_psix =
      ratio(rec.jump_psix - rec.predicted_psix, rec.predicted_psix);
  rec.component_ratio = rec.jump_psi(1) == 0.0
                            ? cplx(0.0, 0.0)
                            : rec.jump_psi(0) / rec.jump_psi(1);
  return rec;
}

} // namespace stepforce
