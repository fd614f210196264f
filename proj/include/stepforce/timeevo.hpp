#pragma once

#include "stepforce/core.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace stepforce {

using cvec = std::vector<std::complex<double>>;

struct PacketSpec {
  double x0 = -15.0; // initial centre, left of the step
  double sigma = 2.0; // rms width of |psi|^2
  double k0 = 1.0;
  GridSpec grid{-60.0, 60.0, 6001};
};

//! Schroedinger wave function on a uniform grid with hard walls.
struct EvolutionState {
  std::vector<double> x;
  cvec psi;
  double t = 0.0;
  PhysicalParams params;
  RegularizedPotential potential;

  double spacing() const { return x[1] - x[0]; }
};

//! Gaussian times e^{i k0 x}, normalized under the trapezoid rule.
//! Throws DomainError("packet-overlap") for |x0| < 5 sigma or x0 >= 0 and
//! DomainError("box-too-small") unless the grid covers [x0 - 10 sigma, 10 sigma].
EvolutionState gaussian_packet(const PacketSpec &spec, const PhysicalParams &params,
                               const RegularizedPotential &potential);

double norm_squared(const EvolutionState &state);
double expectation_position(const EvolutionState &state);
//! -int phi_eps'(x) |psi|^2 dx, trapezoid rule.
double expectation_force(const EvolutionState &state);

//! Spectral <p> with a cached FFT plan for one grid size.
class MomentumMeter {
public:
  explicit MomentumMeter(std::size_t n);
  ~MomentumMeter();
  MomentumMeter(const MomentumMeter &) = delete;
  MomentumMeter &operator=(const MomentumMeter &) = delete;

  double operator()(const EvolutionState &state);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double expectation_momentum(const EvolutionState &state);

//! Largest |psi| over the ten grid points next to each wall.
double wall_amplitude(const EvolutionState &state);

inline constexpr double wall_tolerance = 1e-6;

//! Largest admissible time step, h^2 m / hbar.
double max_time_step(const EvolutionState &state);

using StepObserver = std::function<void(const EvolutionState &)>;

//! Crank-Nicolson with Dirichlet walls and a second-order Laplacian. The
//! observer, if any, sees the state after every step. Throws
//! DomainError("under-resolved") for dt above max_time_step and
//! DomainError("box-too-small") once the wall amplitude exceeds 1e-6.
EvolutionState evolve(EvolutionState state, double dt, long n_steps,
                      const StepObserver &observer = {});

struct EhrenfestRow {
  double t;
  double px_expect;
  double dpdt; // central difference
  double force_expect;
  double norm;
};

struct EhrenfestReport {
  std::vector<EhrenfestRow> rows; // interior steps
  double max_deviation = 0.0;     // max |dpdt - force|
  double peak_force = 0.0;        // max |force|
  double max_norm_drift = 0.0;
  double max_wall_amplitude = 0.0;

  //! max_deviation / peak_force, or max_deviation when the force vanishes.
  double relative_deviation() const {
    return peak_force > 0.0 ? max_deviation / peak_force : max_deviation;
  }
};

EhrenfestReport ehrenfest_report(const PacketSpec &spec,
                                 const PhysicalParams &params,
                                 const RegularizedPotential &potential,
                                 double dt, long n_steps);

struct SideProbabilities {
  double left;  // x < 0
  double right; // x > 0
};

SideProbabilities side_probabilities(const EvolutionState &state);

} // namespace stepforce
