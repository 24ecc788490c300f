#pragma once

// Verification suites: named collections of checks over random sample points.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "g2lab/models.hpp"
#include "g2lab/moduli.hpp"
#include "g2lab/report.hpp"

namespace g2lab {

struct SuiteOptions {
    std::uint64_t seed = 0;
    /// Replaces the step of every jet order when set.
    std::optional<double> fd_step;
    /// Replaces the Richardson levels of every jet order when set.
    std::optional<int> fd_richardson;
    /// Multiplies every tolerance.
    double tol_scale = 1.0;
    T3K3Chart::Spec t3k3;

    JetSchemes jet_schemes() const;
};

/// kernel, g2, flat7, full35, t3k3, period.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite. Checks that raise a library error
/// are recorded as failures with a NaN residual.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& options);

} // namespace g2lab
