#include "stepforce/report.hpp"

#include <chrono>

namespace stepforce {

Json build_report(const RunConfig &config, const CriterionHook &hook) {
  Json report;
  report["tool"] = std::string(tool_name);
  report["version"] = std::string(tool_version);
  report["resolved_config"] = config.to_json();

  Json modes = Json::array();
  const auto flagship = PhysicalParams::natural(0.5);
  for (auto [th, energy] : {std::pair{Theory::S, 1.0}, std::pair{Theory::KFG, 2.0},
                            std::pair{Theory::D, 2.0}})
    modes.push_back(to_json(boundary_terms(solve_step_mode(th, energy, flagship))));
  report["flagship_modes"] = modes;

  Json results = Json::array();
  int passed = 0;
  for (auto criterion : criteria()) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r = criterion(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (hook)
      hook(r, seconds);
    passed += r.passed;
    results.push_back(r.to_json());
  }
  report["criteria"] = results;
  report["summary"] = Json{{"passed", passed},
                           {"failed", static_cast<int>(criteria().size()) - passed},
                           {"all_passed", passed == static_cast<int>(criteria().size())}};
  return report;
}

} // namespace stepforce
