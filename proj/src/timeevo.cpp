#include "stepforce/timeevo.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stepforce {

namespace {

using cplx = std::complex<double>;

template <class F> double trapezoid(const EvolutionState &s, F &&f) {
  const std::size_t n = s.x.size();
  double sum = 0.5 * (f(0) + f(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i)
    sum += f(i);
  return sum * s.spacing();
}

} // namespace

EvolutionState gaussian_packet(const PacketSpec &spec, const PhysicalParams &params,
                               const RegularizedPotential &potential) {
  if (!(spec.sigma > 0.0) || !(spec.k0 > 0.0))
    throw ConfigError("packet needs sigma > 0 and k0 > 0");
  if (!(spec.x0 < 0.0) || std::abs(spec.x0) < 5.0 * spec.sigma)
    throw DomainError("packet-overlap",
                      "packet must start at x0 <= -5 sigma, clear of the step");
  if (spec.grid.x_min > spec.x0 - 10.0 * spec.sigma ||
      spec.grid.x_max < 10.0 * spec.sigma)
    throw DomainError("box-too-small",
                      "grid must cover [x0 - 10 sigma, 10 sigma]");

  EvolutionState s{grid_build(spec.grid), {}, 0.0, params, potential};
  s.psi.resize(s.x.size());
  const double w = 4.0 * spec.sigma * spec.sigma;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double d = s.x[i] - spec.x0;
    s.psi[i] = std::exp(-d * d / w) * std::polar(1.0, spec.k0 * s.x[i]);
  }
  s.psi.front() = s.psi.back() = 0.0;
  const double scale = 1.0 / std::sqrt(norm_squared(s));
  for (auto &v : s.psi)
    v *= scale;
  return s;
}

double norm_squared(const EvolutionState &s) {
  return trapezoid(s, [&](std::size_t i) { return std::norm(s.psi[i]); });
}

double expectation_position(const EvolutionState &s) {
  return trapezoid(s, [&](std::size_t i) { return s.x[i] * std::norm(s.psi[i]); });
}

double expectation_force(const EvolutionState &s) {
  if (s.potential.v0() == 0.0)
    return 0.0;
  return -trapezoid(s, [&](std::size_t i) {
    return s.potential.derivative(s.x[i]) * std::norm(s.psi[i]);
  });
}

struct MomentumMeter::Impl {
  std::size_t n;
  fftw_complex *in;
  fftw_complex *out;
  fftw_plan plan;
};

MomentumMeter::MomentumMeter(std::size_t n) : impl_(std::make_unique<Impl>()) {
  impl_->n = n;
  impl_->in = fftw_alloc_complex(n);
  impl_->out = fftw_alloc_complex(n);
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->in, impl_->out,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
}

MomentumMeter::~MomentumMeter() {
  fftw_destroy_plan(impl_->plan);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
}

double MomentumMeter::operator()(const EvolutionState &s) {
  const std::size_t n = impl_->n;
  if (s.psi.size() != n)
    throw ConfigError("momentum meter built for a different grid size");
  std::copy(s.psi.begin(), s.psi.end(), reinterpret_cast<cplx *>(impl_->in));
  fftw_execute(impl_->plan);
  const auto *hat = reinterpret_cast<const cplx *>(impl_->out);
  const double dk = 2.0 * std::numbers::pi / (n * s.spacing());
  // Parseval with the periodic extension; the Nyquist mode carries no
  // momentum so the operator stays Hermitian.
  double sum = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    if (2 * j == n)
      continue;
    const double k = 2 * j < n ? dk * j : -dk * static_cast<double>(n - j);
    sum += k * std::norm(hat[j]);
  }
  return s.params.hbar * sum * s.spacing() / n;
}

double expectation_momentum(const EvolutionState &state) {
  MomentumMeter meter(state.psi.size());
  return meter(state);
}

double wall_amplitude(const EvolutionState &s) {
  const std::size_t n = s.psi.size();
  const std::size_t m = std::min<std::size_t>(10, n / 2);
  double amp = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    amp = std::max({amp, std::abs(s.psi[i]), std::abs(s.psi[n - 1 - i])});
  return amp;
}

double max_time_step(const EvolutionState &s) {
  const double h = s.spacing();
  return h * h * s.params.mass / s.params.hbar;
}

EvolutionState evolve(EvolutionState s, double dt, long n_steps,
                      const StepObserver &observer) {
  if (!(dt > 0.0) || n_steps < 0)
    throw ConfigError("evolution needs dt > 0 and n_steps >= 0");
  if (dt > max_time_step(s) * (1.0 + 1e-12))
    throw DomainError("under-resolved", "time step exceeds h^2 m / hbar");

  const std::size_t n = s.psi.size();
  const auto &p = s.params;
  const double h = s.spacing();
  const double kin = p.hbar * p.hbar / (2.0 * p.mass * h * h);
  const cplx a = cplx(0.0, 0.5 * dt / p.hbar);

  // (1 + a H) psi_new = (1 - a H) psi_old on interior points; H is
  // tridiagonal with off-diagonal -kin and diagonal 2 kin + phi.
  std::vector<cplx> diag(n), cprime(n), rhs(n);
  const cplx off = -a * kin;
  for (std::size_t i = 1; i + 1 < n; ++i)
    diag[i] = 1.0 + a * (2.0 * kin + s.potential.eval(s.x[i]));
  // Thomas factorization, reused for every step
  std::vector<cplx> inv_denom(n);
  inv_denom[1] = 1.0 / diag[1];
  cprime[1] = off * inv_denom[1];
  for (std::size_t i = 2; i + 1 < n; ++i) {
    inv_denom[i] = 1.0 / (diag[i] - off * cprime[i - 1]);
    cprime[i] = off * inv_denom[i];
  }
  std::vector<cplx> explicit_diag(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    explicit_diag[i] = 2.0 - diag[i];

  for (long step = 0; step < n_steps; ++step) {
    auto &psi = s.psi;
    for (std::size_t i = 1; i + 1 < n; ++i)
      rhs[i] = explicit_diag[i] * psi[i] - off * (psi[i - 1] + psi[i + 1]);
    psi[1] = rhs[1] * inv_denom[1];
    for (std::size_t i = 2; i + 1 < n; ++i)
      psi[i] = (rhs[i] - off * psi[i - 1]) * inv_denom[i];
    for (std::size_t i = n - 2; i-- > 1;)
      psi[i] -= cprime[i] * psi[i + 1];
    s.t += dt;
    if (wall_amplitude(s) > wall_tolerance)
      throw DomainError("box-too-small",
                        "wave function reached the box walls at t = " +
                            std::to_string(s.t));
    if (observer)
      observer(s);
  }
  return s;
}

EhrenfestReport ehrenfest_report(const PacketSpec &spec,
                                 const PhysicalParams &params,
                                 const RegularizedPotential &potential,
                                 double dt, long n_steps) {
  if (n_steps < 2)
    throw ConfigError("Ehrenfest run needs at least two steps");
  const EvolutionState start = gaussian_packet(spec, params, potential);
  MomentumMeter meter(start.psi.size());

  std::vector<double> slope(start.x.size());
  for (std::size_t i = 0; i < slope.size(); ++i)
    slope[i] = potential.derivative(start.x[i]);
  auto force_of = [&](const EvolutionState &s) {
    return -trapezoid(s, [&](std::size_t i) { return slope[i] * std::norm(s.psi[i]); });
  };

  std::vector<double> t, px, force, norm;
  double wall = 0.0;
  auto record = [&](const EvolutionState &s) {
    wall = std::max(wall, wall_amplitude(s));
    t.push_back(s.t);
    px.push_back(meter(s));
    force.push_back(force_of(s));
    norm.push_back(norm_squared(s));
  };
  record(start);
  evolve(start, dt, n_steps, record);

  EhrenfestReport rep;
  for (std::size_t i = 0; i < t.size(); ++i) {
    rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(norm[i] - 1.0));
    rep.peak_force = std::max(rep.peak_force, std::abs(force[i]));
  }
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double dpdt = (px[i + 1] - px[i - 1]) / (2.0 * dt);
    rep.rows.push_back({t[i], px[i], dpdt, force[i], norm[i]});
    rep.max_deviation = std::max(rep.max_deviation, std::abs(dpdt - force[i]));
  }
  rep.max_wall_amplitude = wall;
  return rep;
}

SideProbabilities side_probabilities(const EvolutionState &s) {
  double left = 0.0, right = 0.0;
  const double h = s.spacing();
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
    // trapezoid per cell, split at the origin
    const double cell = 0.5 * h * (std::norm(s.psi[i]) + std::norm(s.psi[i + 1]));
    const double a = s.x[i], b = s.x[i + 1];
    if (b <= 0.0)
      left += cell;
    else if (a >= 0.0)
      right += cell;
    else {
      left += cell * (-a) / h;
      right += cell * b / h;
    }
  }
  return {left, right};
}

} // namespace stepforce
