#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lrw/chain.hpp"

namespace lrw::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDiagnostic = 2;

/// cycle:N | line:N | grid:K | complete:N | file:PATH
Graph parse_graph_spec(std::string_view spec);
/// distance:D | gather | capture | first-alone
Goal parse_goal_spec(std::string_view spec);
/// Comma-separated doubles, each in [0, 1].
std::vector<double> parse_laziness_list(std::string_view text);
/// lo:hi:step, inclusive of hi up to rounding.
std::vector<double> parse_range(std::string_view text);

/// Runs one command line. JSON and CSV go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrw::cli
