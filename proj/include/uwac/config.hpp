#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uwac/fit.hpp"
#include "uwac/solver.hpp"
#include "uwac/sweep.hpp"

namespace uwac {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// One sweep axis. Spacing is log by default; endpoints are inclusive.
struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    bool log_spacing = true;

    std::vector<double> values() const;
};

/// Either a named preset ("case1", "case2") or explicit axes, not both.
struct SweepConfig {
    std::string case_preset;
    bool has_axes = false;
    AxisSpec l_km;
    AxisSpec c_kbps;
    unsigned threads = 0;

    SweepSpec make_spec() const;
};

/// Full run configuration. Defaults match the library defaults, so an empty
/// JSON object is a valid config. Unknown keys anywhere are rejected.
struct RunConfig {
    EnvironmentParams env;
    SolverSettings solver;
    SweepConfig sweep;
    FitOptions fit;
    std::string output_dir = "out";

    void validate() const;
};

RunConfig parse_run_config_text(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON for hashing: every result-determining field present with
/// sorted keys. Execution knobs (threads, output_dir) are excluded so runs
/// that differ only in them produce identically stamped outputs.
std::string canonical_config_json(const RunConfig& config);

uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of the FNV-1a hash of the canonical JSON. Two configs hash
/// equal exactly when their result-determining settings are equal.
std::string config_hash(const RunConfig& config);

}  // namespace uwac
