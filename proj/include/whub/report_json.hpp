#pragma once

#include <string>

#include "whub/oracle.hpp"
#include "whub/solver.hpp"

namespace whub {

/// Result JSON emitted by the solve command. Selections are 1-based per set.
std::string solve_report_to_json(const SolveReport& report, int k, int indent = 2);

std::string gap_report_to_json(const GapReport& report, int indent = 2);

}  // namespace whub
