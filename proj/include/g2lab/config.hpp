#pragma once

// Run configuration for the g2lab command line: JSON file, flags, environment.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "g2lab/report.hpp"
#include "g2lab/suites.hpp"

namespace g2lab {

struct RunConfig {
    std::string model = "flat7";
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = 0;
    std::optional<double> fd_step;
    std::optional<int> fd_richardson;
    double tol = 1.0;
    /// Empty writes the report to standard output.
    std::string out;
    std::string format = "json";
    T3K3Chart::Spec t3k3;
    /// Raw t3k3 section, echoed verbatim.
    nlohmann::ordered_json t3k3_json = nlohmann::ordered_json::object();
};

/// Fields set explicitly on the command line.
struct ConfigOverrides {
    std::optional<std::string> model;
    std::optional<std::vector<std::string>> suites;
    std::optional<std::uint64_t> seed;
    std::optional<double> fd_step;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

/// Applies a JSON config document on top of cfg. Unknown keys throw
/// ConfigError naming the key.
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc);

/// Precedence: flags, then the config file, then G2LAB_SEED (seed only), then defaults.
RunConfig resolve_config(const std::optional<std::string>& config_path, const ConfigOverrides& flags,
                         const char* env_seed);

/// Expands "all" and validates names and the model.
std::vector<std::string> expand_suites(const RunConfig& cfg);

nlohmann::ordered_json config_echo(const RunConfig& cfg);

/// Runs the suites and assembles the report (no output).
Report run_report(const RunConfig& cfg);

/// Full run: executes, writes the report, returns 0 (all pass), 1 (a check
/// failed) or 2 (configuration or IO error, no report written).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace g2lab
