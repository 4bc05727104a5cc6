#pragma once

#include <string>
#include <utility>
#include <vector>

namespace subexp::cli {

/// Entry point for the `subexp` tool. Commands: eval, check, estimate,
/// lln, envelope. Exit codes: 0 success/unbiased, 1 biased,
/// 2 usage/config error, 3 inconclusive-at-budget.
int run(int argc, const char* const* argv);

/// Parses a grid spec "lo:hi;lo:hi;..." into parameter pairs.
std::vector<std::pair<double, double>> parse_grid_spec(const std::string& spec);

} // namespace subexp::cli
