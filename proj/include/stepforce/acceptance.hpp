#pragma once

#include "stepforce/config.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace stepforce {

//! Uniform doubles from a seeded 64-bit Mersenne twister; the mapping is
//! spelled out so that draws are identical across standard libraries.
class UniformSource {
public:
  explicit UniformSource(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

private:
  std::mt19937_64 gen_;
};

struct Draw {
  double energy;
  double v0;
};

//! Admissible (E, V0) pairs in natural units covering every regime of the
//! theory. Draws within 1e-3 of a threshold, and KFG Klein draws with
//! |k + q| < 0.05 k (the matching pole), are redrawn.
std::vector<Draw> random_admissible(Theory theory, int count, std::uint64_t seed);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
  double budget_seconds = 0.0;

  Json to_json() const;
};

CriterionResult check_matching_flux(const RunConfig &config);
CriterionResult check_matricial_conditions(const RunConfig &config);
CriterionResult check_density_jump(const RunConfig &config);
CriterionResult check_force_identities(const RunConfig &config);
CriterionResult check_route_b_sd(const RunConfig &config);
CriterionResult check_route_b_kfg(const RunConfig &config);
CriterionResult check_nonrel_limit(const RunConfig &config);
CriterionResult check_infinite_step(const RunConfig &config);
CriterionResult check_interface_jumps(const RunConfig &config);
CriterionResult check_ehrenfest(const RunConfig &config);

using Criterion = CriterionResult (*)(const RunConfig &);
//! Criteria 1-10 in order. Determinism (11) is checked by the callers, which
//! compare two serialized reports.
const std::vector<Criterion> &criteria();

} // namespace stepforce
