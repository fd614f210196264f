#include "stepforce/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace stepforce;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";

  std::optional<std::string> theory;
  std::optional<double> energy;
  std::optional<double> v0;
  std::vector<std::string> shapes;
  std::vector<double> epsilons;
  std::string kind;
  std::optional<double> dt;
  std::optional<long> steps;
};

void write_file(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void echo_config(const RunConfig &cfg) {
  std::cout << "# resolved config\n" << dump_json(cfg.to_json());
}

std::string line(const char *label, double value) {
  return std::string(label) + " " + format_double(value) + "\n";
}

int run_mode(const RunConfig &cfg, const fs::path &out) {
  const auto mode = solve_step_mode(cfg.mode.theory, cfg.mode.energy, cfg.params);
  const auto rep = boundary_terms(mode);
  echo_config(cfg);
  std::cout << "# mode\n"
            << "theory " << to_string(rep.theory) << "\n"
            << "regime " << to_string(rep.regime) << "\n"
            << line("r_re", rep.r.real()) << line("r_im", rep.r.imag())
            << line("t_re", rep.t.real()) << line("t_im", rep.t.imag())
            << line("rho_left", rep.rho_left) << line("rho_right", rep.rho_right)
            << line("density_jump", rep.rho_right - rep.rho_left)
            << line("route_a", rep.route_a)
            << line("route_a_scalar_form", rep.route_a_scalar_form)
            << line("kinetic_term", rep.route_c.kinetic_term)
            << line("mass_term", rep.route_c.mass_term)
            << line("potential_term", rep.route_c.potential_term)
            << line("identity_residual", rep.identity_residual)
            << line("half_jump", rep.delta_integral.half_jump)
            << line("midpoint", rep.delta_integral.midpoint)
            << line("left_value", rep.delta_integral.left_value)
            << line("right_value", rep.delta_integral.right_value);
  write_file(out / "mode.csv", mode_csv(rep).str());
  write_file(out / "mode.json",
             dump_json(Json{{"resolved_config", cfg.to_json()}, {"mode", to_json(rep)}}));
  return 0;
}

int run_converge(const RunConfig &cfg, const fs::path &out) {
  const auto &cc = cfg.converge;
  const auto rep = boundary_terms(solve_step_mode(cc.theory, cc.energy, cfg.params));
  echo_config(cfg);

  struct Candidate {
    std::string name;
    double value;
  };
  std::vector<Candidate> candidates{{"closed-form route A", rep.route_a}};
  if (cc.theory == Theory::KFG)
    candidates.push_back({"midpoint convention", -cfg.params.v0 * rep.delta_integral.midpoint});
  const double tol = cc.theory == Theory::KFG ? 5e-3 : 1e-3;

  std::vector<ConvergenceSeries> all;
  Json fits = Json::array();
  double mean = 0.0;
  for (Shape sh : cc.shapes) {
    all.push_back(route_b_series(cc.theory, cc.energy, cfg.params, sh, cc.epsilons, cc.solver));
    const auto fit = extrapolate(all.back());
    mean += fit.limit / cc.shapes.size();
    Json f = to_json(fit);
    f["shape"] = std::string(to_string(sh));
    fits.push_back(f);
  }

  std::string verdict;
  std::vector<std::string> missed;
  for (const auto &c : candidates) {
    const double rel = std::abs(mean - c.value) / std::max(std::abs(c.value), 1e-300);
    if (rel <= tol)
      verdict = "matches " + c.name + " within " + format_double(tol);
    else
      missed.push_back(c.name + " (relative difference " + format_double(rel) + ")");
  }
  if (verdict.empty())
    verdict = "neither";
  for (const auto &m : missed)
    verdict += "; differs from " + m;

  std::cout << "# convergence\n" << convergence_csv(all).str() << "# fits\n";
  for (const auto &f : fits)
    std::cout << f["shape"].get<std::string>() << " limit " << format_double(f["limit"].get<double>())
              << " order " << format_double(f["order"].get<double>()) << "\n";
  std::cout << "verdict: " << verdict << "\n";

  Json cand = Json::array();
  for (const auto &c : candidates)
    cand.push_back(Json{{"name", c.name}, {"value", c.value}});
  Json series = Json::array();
  for (const auto &s : all)
    series.push_back(to_json(s));
  write_file(out / "converge.csv", convergence_csv(all).str());
  write_file(out / "converge.json", dump_json(Json{{"resolved_config", cfg.to_json()},
                                                   {"series", series},
                                                   {"fits", fits},
                                                   {"mean_limit", mean},
                                                   {"candidates", cand},
                                                   {"verdict", verdict}}));
  return 0;
}

int run_limits(const RunConfig &cfg, const fs::path &out) {
  const auto &lc = cfg.limits;
  if (lc.kind == "nonrel") {
    const auto table = nonrel_residuals(lc.nonrel.e_nr, lc.nonrel.c_list,
                                        cfg.params.with_v0(lc.nonrel.v0));
    echo_config(cfg);
    const auto csv = nonrel_csv(table).str();
    std::cout << "# nonrel\n" << csv << line("slope_density", table.slope_density)
              << line("slope_force", table.slope_force);
    write_file(out / "limits_nonrel.csv", csv);
    write_file(out / "limits.json",
               dump_json(Json{{"resolved_config", cfg.to_json()}, {"nonrel", to_json(table)}}));
    return 0;
  }
  const auto table = infinite_step_sweep(lc.infinite_step.energy, lc.infinite_step.v0_list,
                                         cfg.params);
  const auto &wc = lc.weak_product;
  std::vector<WeakProductCheck> checks;
  for (double eps : wc.epsilons)
    checks.push_back(weak_product_check(
        wc.energy, RegularizedPotential(cfg.params.with_v0(wc.v0), eps, wc.shape), wc.window));
  echo_config(cfg);
  const auto csv = infinite_step_csv(table).str();
  const auto wcsv = weak_product_csv(checks).str();
  std::cout << "# infinite step\n" << csv << line("candidate_slope", table.slope);
  for (double v : table.rejected)
    std::cout << "rejected V0 " << format_double(v) << " (V0 <= E)\n";
  std::cout << "# weak product\n" << wcsv;
  Json wj = Json::array();
  for (const auto &c : checks)
    wj.push_back(to_json(c));
  write_file(out / "limits_infinite_step.csv", csv);
  write_file(out / "limits_weak_product.csv", wcsv);
  write_file(out / "limits.json", dump_json(Json{{"resolved_config", cfg.to_json()},
                                                 {"infinite_step", to_json(table)},
                                                 {"weak_product", wj}}));
  return 0;
}

int run_ehrenfest(const RunConfig &cfg, const fs::path &out) {
  const auto &ec = cfg.ehrenfest;
  const RegularizedPotential pot(cfg.params, ec.epsilon, ec.shape);
  echo_config(cfg);
  const auto rep = ehrenfest_report(packet_spec(ec), cfg.params, pot, ec.dt, ec.n_steps);
  const auto csv = ehrenfest_csv(rep, ec.row_stride).str();
  std::cout << "# ehrenfest\n"
            << line("max_deviation", rep.max_deviation) << line("peak_force", rep.peak_force)
            << line("relative_deviation", rep.relative_deviation())
            << line("max_norm_drift", rep.max_norm_drift)
            << line("max_wall_amplitude", rep.max_wall_amplitude);
  write_file(out / "ehrenfest.csv", csv);
  write_file(out / "ehrenfest.json",
             dump_json(Json{{"resolved_config", cfg.to_json()}, {"ehrenfest", to_json(rep)}}));
  return 0;
}

int run_report(const RunConfig &cfg, const fs::path &out) {
  echo_config(cfg);
  std::string timing;
  const auto report = build_report(cfg, [&](const CriterionResult &r, double seconds) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail
              << "\n"
              << std::flush;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d %s %.3f\n", r.id, r.name.c_str(), seconds);
    timing += buf;
  });
  write_file(out / "report.json", dump_json(report));
  std::cerr << "# wall-clock seconds per criterion\n" << timing;
  write_file(out / "timing.txt", timing);
  return report["summary"]["all_passed"].get<bool>() ? 0 : 1;
}

RunConfig resolve(const Options &o, const std::string &command) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.seed)
    cfg.seed = *o.seed;
  if (o.v0)
    cfg.params.v0 = *o.v0;
  auto theory = [&](Theory &t) {
    if (o.theory) {
      try {
        t = theory_from_string(*o.theory);
      } catch (const std::exception &e) {
        throw ConfigError(e.what());
      }
    }
  };
  if (command == "mode") {
    theory(cfg.mode.theory);
    if (o.energy)
      cfg.mode.energy = *o.energy;
  } else if (command == "converge") {
    theory(cfg.converge.theory);
    if (o.energy)
      cfg.converge.energy = *o.energy;
    if (!o.shapes.empty()) {
      cfg.converge.shapes.clear();
      for (const auto &s : o.shapes) {
        try {
          cfg.converge.shapes.push_back(shape_from_string(s));
        } catch (const std::exception &e) {
          throw ConfigError(e.what());
        }
      }
    }
    if (!o.epsilons.empty())
      cfg.converge.epsilons = o.epsilons;
  } else if (command == "limits") {
    if (!o.kind.empty())
      cfg.limits.kind = o.kind;
  } else if (command == "ehrenfest") {
    if (o.dt)
      cfg.ehrenfest.dt = *o.dt;
    if (o.steps)
      cfg.ehrenfest.n_steps = *o.steps;
  }
  validate(cfg);
  return cfg;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Mean external force on S, KFG and Dirac particles at a potential step"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON configuration file");
  app.add_option("--seed", o.seed, "seed of the randomized sweeps (default 0)");
  app.add_option("--out", o.out_dir, "output directory (default ./out)");

  auto *mode = app.add_subcommand("mode", "exact sharp-step mode and mean force");
  mode->add_option("--theory", o.theory, "s, kfg or d");
  mode->add_option("--energy", o.energy, "total energy E");
  mode->add_option("--v0", o.v0, "step height");

  auto *converge = app.add_subcommand("converge", "regularized force as eps -> 0");
  converge->add_option("--theory", o.theory, "s, kfg or d");
  converge->add_option("--energy", o.energy, "total energy E");
  converge->add_option("--v0", o.v0, "step height");
  converge->add_option("--shapes", o.shapes, "logistic, erf, ramp")->delimiter(',');
  converge->add_option("--epsilons", o.epsilons, "decreasing widths")->delimiter(',');

  auto *limits = app.add_subcommand("limits", "nonrelativistic and infinite-step limits");
  limits->add_option("kind,--kind", o.kind, "nonrel or infinite-step");

  auto *ehrenfest = app.add_subcommand("ehrenfest", "wavepacket check of d<p>/dt = <f>");
  ehrenfest->add_option("--v0", o.v0, "step height");
  ehrenfest->add_option("--dt", o.dt, "time step");
  ehrenfest->add_option("--steps", o.steps, "number of steps");

  auto *report = app.add_subcommand("report", "run the acceptance suite, write report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto *sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    const RunConfig cfg = resolve(o, command);
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    if (sub == mode)
      return run_mode(cfg, out);
    if (sub == converge)
      return run_converge(cfg, out);
    if (sub == limits)
      return run_limits(cfg, out);
    if (sub == ehrenfest)
      return run_ehrenfest(cfg, out);
    if (sub == report)
      return run_report(cfg, out);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError &e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
