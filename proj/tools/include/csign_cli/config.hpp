#pragma once

// Run configuration for the csign tool: JSON file, CSIGN_* environment
// variables and command-line flags, applied in that order.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csign/sweep.hpp"

namespace csign::cli {

/// Malformed config text, unknown key or wrong value type (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CalibrateConfig {
    double t_min = 2.0;
    double horizon = 100.0;
    std::vector<double> detunings;  // delta/g values; empty means physics.delta_over_g
    std::vector<std::string> ratios;
    bool running_min = false;
    bool phase_correction = true;
};

struct OptimizeConfig {
    OptimumSearch search{};
    std::vector<double> delta_offsets;
    std::vector<double> leaks;
};

struct OutputConfig {
    std::string out;          // primary output path; empty means stdout
    std::string diagnostics;  // per-step CSV for simulate
    bool include_matrices = false;
};

struct RunConfig {
    SimParams sim;
    SweepSpec sweep;
    CalibrateConfig calibrate;
    OptimizeConfig optimize;
    OutputConfig output;
};

/// Default run configuration (workers = available cores).
RunConfig default_config();

/// Parses a JSON config onto `base`. Unknown keys are rejected by path.
RunConfig parse_config(const std::string& text, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
EnvLookup process_env();

/// Flag-level overrides, shared by env vars (CSIGN_T, ...) and flags.
struct Overrides {
    std::optional<double> t;
    std::optional<double> delta_over_g;
    std::optional<double> ly_over_g;
    std::optional<int> phs;
    std::optional<long long> dt_steps;
    std::optional<long long> workers;
    std::optional<unsigned long long> seed;
    std::optional<std::string> out;
};

Overrides env_overrides(const EnvLookup& env);
void apply(const Overrides& o, RunConfig& cfg);

}  // namespace csign::cli
