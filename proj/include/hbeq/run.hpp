#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hbeq/config.hpp"

namespace hbeq {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
inline constexpr int violation = 4;
}  // namespace exit_code

/// Exit code for a library error: parse and parameter problems are config
/// errors (2), everything raised while solving or simulating is numerical (3).
int exit_code_for(const Error& e);

struct RunOptions {
    unsigned threads = 1;
    std::optional<std::string> out;         // overrides output.path
    std::optional<std::string> dump_paths;  // per-path CSV (simulate only)
    std::uint64_t dump_limit = 10000;
};

/// Column sets, fixed per mode.
const std::vector<std::string>& solve_columns();
const std::vector<std::string>& measures_columns();
const std::vector<std::string>& simulate_columns();
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& check_columns();
const std::vector<std::string>& multi_columns();           // multi-solve, multi-measures
const std::vector<std::string>& multi_simulate_columns();
const std::vector<std::string>& leadlag_columns();
const std::vector<std::string>& path_columns();

/// Renders the mode's output document (CSV or JSON text). Returns the exit code
/// the run should end with; `log` receives a one-line human summary.
int render(const RunConfig& cfg, const RunOptions& opts, std::string& document, std::ostream& log);

/// render() plus writing the document (and any chart/dump) to disk or stdout.
int run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& log);

/// %.17g
std::string format_double(double v);

/// Minimal standalone SVG line chart.
std::string line_chart_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& x_label,
                           const std::string& y_label);

}  // namespace hbeq
