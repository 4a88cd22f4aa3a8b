#pragma once

#include "tqd/sweep.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tqd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses the JSON form of a SweepSpec:
///   {"model": "spin", "swept": {"parameter": "j1", "from": -12, "to": 8, "points": 401},
///    "fixed": {"j": 1}, "temperatures": [0.5, 1.0], "bipartitions": ["pair_12"]}
/// Throws std::invalid_argument on malformed input.
SweepSpec parse_sweep_spec(const std::string& json_text);

/// The sweep behind figure 1-4; panel 'a' (J = 1) or 'b' (J = -1) for figures 1-3.
SweepSpec figure_spec(int figure, char panel);

} // namespace tqd::cli
