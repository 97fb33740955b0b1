#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hbeq/battery.hpp"
#include "hbeq/model.hpp"
#include "hbeq/multi_asset.hpp"
#include "hbeq/simulator.hpp"

namespace hbeq {

// Config files are flat `key = value` lines. `#` starts a comment, arrays are
// written `[1, 2, 3]` and matrices are row-major arrays of length n².
//
//   mode = measures
//   model.d_bar = 100
//   model.sigma_d2 = 4
//   ...

enum class Mode { solve, measures, simulate, sweep, check, multi_solve, multi_measures, multi_simulate, leadlag };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);
bool is_multi(Mode m);

enum class OutputFormat { csv, json };

struct OutputSpec {
    OutputFormat format = OutputFormat::csv;
    std::string path = "-";  // "-" writes to stdout
    std::optional<std::string> chart;
};

struct SweepSpec {
    std::string param;
    double from = 0;
    double to = 0;
    int steps = 0;

    /// Inclusive linspace of `steps` points.
    std::vector<double> grid() const;
};

/// Scalar keys a sweep may vary (model field names without the prefix).
const std::vector<std::string>& sweepable_params();
SingleParamsd with_param(SingleParamsd p, std::string_view name, double value);

struct LeadLagSpec {
    std::set<Eigen::Index> muted;  // zero-based
    Vectord s_active;
};

struct RunConfig {
    Mode mode = Mode::solve;
    std::variant<std::monostate, SingleParamsd, MultiParamsd> params;
    std::optional<SimConfig> sim;
    std::optional<SweepSpec> sweep;
    std::optional<LeadLagSpec> leadlag;
    BatteryOptions check;
    OutputSpec output;
    ValidationOptions validation;

    const SingleParamsd& single() const { return std::get<SingleParamsd>(params); }
    const MultiParamsd& multi() const { return std::get<MultiParamsd>(params); }
};

/// Parses and validates a config. `mode_override` replaces the `mode` key (the
/// CLI subcommands use it); `opts` seeds validation before `validation.*` keys.
/// Throws ParseError for syntax, unknown or missing keys and bad shapes, and
/// InvalidParam/InvalidMute for values that fail model validation.
RunConfig parse_config(std::string_view text, std::optional<Mode> mode_override = std::nullopt,
                       const ValidationOptions& opts = {});

}  // namespace hbeq
