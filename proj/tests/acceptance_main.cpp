// Acceptance run: one PASS/FAIL line per criterion, tolerances live in the
// library. Criterion 11 builds the report a second time and compares bytes.
#include "stepforce/report.hpp"

#include <chrono>
#include <cstdio>

using namespace stepforce;

int main() {
  const RunConfig cfg;
  int failed = 0;
  const auto first = build_report(cfg, [&](const CriterionResult &r, double seconds) {
    const bool in_budget = seconds <= r.budget_seconds;
    const bool ok = r.passed && in_budget;
    failed += !ok;
    std::printf("%s %2d %-32s %s (%.1f s of %.0f s)\n", ok ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), seconds, r.budget_seconds);
    std::fflush(stdout);
  });

  const auto t0 = std::chrono::steady_clock::now();
  const auto second = build_report(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool same = dump_json(first) == dump_json(second);
  failed += !same;
  std::printf("%s %2d %-32s %s (%.1f s)\n", same ? "PASS" : "FAIL", 11, "determinism",
              same ? "two reports with seed 0 are byte-identical" : "reports differ", seconds);
  return failed == 0 ? 0 : 1;
}
