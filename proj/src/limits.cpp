#include "stepforce/limits.hpp"

#include "stepforce/force.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>

namespace stepforce {

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2)
    return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                    : (n * sxy - sx * sy) / den;
}

const std::vector<Probe> &nonrel_probes() {
  static const std::vector<Probe> probes{
      {-2.0, Side::left}, {-1.0, Side::left}, {-0.5, Side::left},
      {0.0, Side::left},  {0.0, Side::right}, {0.5, Side::right},
      {1.0, Side::right}, {2.0, Side::right}};
  return probes;
}

namespace {

double density_probe(const ScatterMode &mode, const Probe &probe) {
  return probe.x == 0.0 ? density_at(mode, probe.side) : density(mode, probe.x);
}

double potential_at(const PhysicalParams &p, const Probe &probe) {
  if (probe.x == 0.0)
    return probe.side == Side::left ? 0.0 : p.v0;
  return StepPotential(p).eval(probe.x);
}

} // namespace

NonrelTable nonrel_residuals(double e_nr, const std::vector<double> &c_list,
                             const PhysicalParams &params) {
  if (!(e_nr > 0.0))
    throw DomainError("below-threshold", "nonrelativistic energy must be positive");
  NonrelTable table{e_nr, params.v0, {}, 0.0, 0.0};
  const ScatterMode s_mode = solve_step_mode(Theory::S, e_nr, params);
  const double rho_s0 = density_at(s_mode, Side::left);

  std::vector<double> cs, res_rho, res_force;
  for (double c : c_list) {
    const PhysicalParams p = params.with_c(c);
    const double mc2 = p.rest_energy();
    NonrelRow row{c, mc2 + e_nr, 0.0, 0.0, "ok"};
    if (e_nr >= mc2) {
      row.tag = "not-nonrelativistic";
      row.residual_density = row.residual_force =
          std::numeric_limits<double>::quiet_NaN();
      table.rows.push_back(row);
      continue;
    }
    const ScatterMode kfg = solve_step_mode(Theory::KFG, row.energy, p);
    for (const auto &probe : nonrel_probes()) {
      const double rho_s = density_probe(s_mode, probe);
      const double approx = (1.0 - potential_at(p, probe) / mc2) * rho_s;
      row.residual_density =
          std::max(row.residual_density,
                   std::abs(density_probe(kfg, probe) - approx) / rho_s);
    }
    // the scalar form avoids the cancellation in rho(0+) - rho(0-) at large c
    const double force = kfg_mean_force_scalar_form(kfg);
    if (p.v0 == 0.0) {
      row.tag = "degenerate";
      row.residual_force = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.residual_force =
          std::abs(force - p.v0 * p.v0 / (2.0 * mc2) * rho_s0) / std::abs(force);
      cs.push_back(c);
      res_rho.push_back(row.residual_density);
      res_force.push_back(row.residual_force);
    }
    table.rows.push_back(row);
  }
  table.slope_density = loglog_slope(cs, res_rho);
  table.slope_force = loglog_slope(cs, res_force);
  return table;
}

InfiniteStepTable infinite_step_sweep(double energy,
                                      const std::vector<double> &v0_list,
                                      const PhysicalParams &params) {
  InfiniteStepTable table{energy, {}, {}, 0.0};
  std::vector<double> v0s, errors;
  for (double v0 : v0_list) {
    if (!(v0 > energy)) {
      table.rejected.push_back(v0);
      continue;
    }
    const PhysicalParams p = params.with_v0(v0);
    const ScatterMode mode = solve_step_mode(Theory::S, energy, p);
    const double k = mode.k.real();
    InfiniteStepRow row{};
    row.v0 = v0;
    row.route_a = mean_force_closed(mode);
    row.exact = -2.0 * p.hbar * p.hbar * k * k / p.mass;
    row.identity_residual = std::abs(row.route_a - row.exact) / std::abs(row.exact);
    row.candidate = -p.hbar * p.hbar / (2.0 * p.mass) *
                    std::norm(mode.psix_at(Side::left));
    row.candidate_error = std::abs(row.candidate - row.exact) / std::abs(row.exact);
    v0s.push_back(v0);
    errors.push_back(row.candidate_error);
    table.rows.push_back(row);
  }
  table.slope = loglog_slope(v0s, errors);
  return table;
}

WeakProductCheck weak_product_check(double energy,
                                   const RegularizedPotential &potential,
                                   double window, const SolverOptions &options) {
  const double eps = potential.epsilon();
  if (window <= eps)
    throw DomainError("unresolved-window", "integration window must exceed eps");
  const auto &p = potential.params();
  const auto mode = solve_smooth_mode(Theory::S, energy, potential, options);
  const auto &model = mode.model();
  const auto &b = model.boundaries;

  cplx integral = 0.0;
  for (std::size_t i = 0; i < model.segments(); ++i) {
    const double lo = std::max(b[i], -window);
    const double hi = std::min(b[i + 1], window);
    if (lo >= hi)
      continue;
    const Spinor start = mode.boundary_states()[i];
    const double phi = model.values[i];
    const double left = b[i];
    auto value = [&](double x) {
      const Spinor s =
          segment_propagator(Theory::S, energy, phi, x - left, p) * start;
      return potential.eval(x) * s(0);
    };
    using G = boost::math::quadrature::gauss<double, 15>;
    integral += cplx(G::integrate([&](double x) { return value(x).real(); }, lo, hi),
                     G::integrate([&](double x) { return value(x).imag(); }, lo, hi));
  }

  const ScatterMode sharp = solve_step_mode(Theory::S, energy, p);
  const cplx target = -p.hbar * p.hbar / (2.0 * p.mass) * sharp.psix_at(Side::left);
  const double scale = std::abs(target);
  const double dev = scale == 0.0 ? std::abs(integral)
                                  : std::abs(integral - target) / scale;
  return {eps, window, integral, target, dev};
}

} // namespace stepforce
