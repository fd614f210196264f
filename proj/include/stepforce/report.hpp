#pragma once

#include "stepforce/acceptance.hpp"

#include <functional>
#include <string_view>

namespace stepforce {

inline constexpr std::string_view tool_name = "stepforce";
inline constexpr std::string_view tool_version = "1.0.0";

//! Called after each criterion with its wall-clock time. Timing never enters
//! the report itself so that reports stay byte-identical across runs.
using CriterionHook = std::function<void(const CriterionResult &, double seconds)>;

//! Runs criteria 1-10 and assembles the report: tool and version, resolved
//! configuration, flagship mode reports and one entry per criterion.
Json build_report(const RunConfig &config, const CriterionHook &hook = {});

} // namespace stepforce
