#pragma once

#include "stepforce/serialize.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stepforce {

struct ModeConfig {
  Theory theory = Theory::KFG;
  double energy = 2.0;
};

struct ConvergeConfig {
  Theory theory = Theory::KFG;
  double energy = 2.0;
  std::vector<Shape> shapes{Shape::logistic, Shape::error_function};
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025, 0.0125};
  SolverOptions solver{};
};

struct NonrelConfig {
  double e_nr = 0.1;
  double v0 = 0.05;
  std::vector<double> c_list{10.0, 100.0, 1000.0};
};

struct InfiniteStepConfig {
  double energy = 1.0;
  std::vector<double> v0_list{10.0, 100.0, 1000.0};
};

struct WeakProductConfig {
  double energy = 1.0;
  double v0 = 1e4;
  double window = 0.1;
  Shape shape = Shape::logistic;
  std::vector<double> epsilons{2e-3, 1e-3, 5e-4};
};

struct JumpConfig {
  double energy = 2.0;
  double delta = 0.2;
  Shape shape = Shape::logistic;
  std::vector<double> epsilons{0.01, 0.005};
};

struct LimitsConfig {
  std::string kind = "nonrel"; // "nonrel" or "infinite-step"
  NonrelConfig nonrel;
  InfiniteStepConfig infinite_step;
  WeakProductConfig weak_product;
};

struct EhrenfestConfig {
  double epsilon = 0.1;
  Shape shape = Shape::logistic;
  double x0 = -15.0;
  double sigma = 2.0;
  double k0 = 1.0;
  GridSpec grid{-51.2, 51.18, 5120};
  double dt = 4e-4;
  long n_steps = 55000;
  long row_stride = 50; // CSV thinning only
};

inline PacketSpec packet_spec(const EhrenfestConfig &e) {
  return PacketSpec{e.x0, e.sigma, e.k0, e.grid};
}

struct ReportConfig {
  int random_draws = 100;
  JumpConfig jumps;
};

struct RunConfig {
  PhysicalParams params = PhysicalParams::natural(0.5);
  std::uint64_t seed = 0;
  ModeConfig mode;
  ConvergeConfig converge;
  LimitsConfig limits;
  EhrenfestConfig ehrenfest;
  ReportConfig report;

  //! Full resolved configuration, every default explicit.
  Json to_json() const;
};

//! Starts from the defaults and applies the document. Throws ConfigError on
//! unknown keys, wrong types and invalid values.
RunConfig parse_config(const Json &document);
RunConfig load_config(const std::string &path);

//! Validates cross-field constraints (positive sizes, decreasing epsilons).
void validate(const RunConfig &config);

} // namespace stepforce
