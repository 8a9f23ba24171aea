#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rbsim/solver.hpp"

namespace rbsim {

/// Axes of a parameter sweep. Empty axes keep the base value.
struct SweepAxes {
    std::vector<std::string> symbol;
    std::vector<int> n;
    std::vector<std::optional<double>> dt;  ///< empty optional means "auto"
    std::vector<double> amplitude;

    bool empty() const { return symbol.empty() && n.empty() && dt.empty() && amplitude.empty(); }
};

struct ConfigFile {
    SolverConfig solver;
    SweepAxes sweep;
};

/// Parses a TOML run configuration. Unknown keys and mistyped values raise
/// ConfigError. Relative IC file paths resolve against `base_dir`.
ConfigFile parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {},
                             const std::string& origin = "<config>");
ConfigFile parse_config_file(const std::filesystem::path& path);

/// Canonical TOML rendering of a resolved configuration; parsing it back
/// yields an identical SolverConfig.
std::string to_toml(const SolverConfig& config);

/// Cartesian product of the sweep axes over the base configuration, in
/// row-major order symbol, n, dt, amplitude.
std::vector<SolverConfig> expand_sweep(const ConfigFile& config);

const char* ic_kind_name(ICSpec::Kind kind);

}  // namespace rbsim
