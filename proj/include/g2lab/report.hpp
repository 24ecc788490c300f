#pragma once

// Check records, report emission and JSON views of library objects.

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "g2lab/exterior.hpp"
#include "g2lab/g2.hpp"
#include "g2lab/period.hpp"
#include "g2lab/tensor.hpp"

namespace g2lab {

struct CheckRecord {
    std::string id;
    std::string paper_ref;
    bool pass = false;
    /// NaN when the check raised an error; detail then holds the message.
    double max_residual = 0.0;
    double tolerance = 0.0;
    int sample_count = 0;
    double runtime_ms = 0.0;
    std::string detail;
};

/// pass iff residual <= tolerance (NaN fails).
CheckRecord make_record(std::string id, std::string paper_ref, double residual, double tolerance, int samples);

struct Report {
    std::string suite;
    std::string model;
    std::uint64_t seed = 0;
    nlohmann::ordered_json config_echo;
    std::vector<CheckRecord> checks;

    int passed() const;
    int failed() const;
};

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(const std::string& name);

/// Checks are emitted sorted by id.
nlohmann::ordered_json report_json(const Report& report);
std::string report_csv(const Report& report);
std::string render(const Report& report, ReportFormat format);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws ConfigError if the file cannot be written.
void write_atomic(const std::string& path, const std::string& content);

nlohmann::ordered_json to_json(const Form& form);
nlohmann::ordered_json to_json(const G2Frame& frame);
nlohmann::ordered_json to_json(const Eigen::MatrixXd& m);
/// Nested arrays, first index outermost.
template <int Rank>
nlohmann::ordered_json tensor_json(const Eigen::Tensor<double, Rank>& t);
nlohmann::ordered_json to_json(const HodgePoint& point);
nlohmann::ordered_json to_json(const TangentRep& xi);

} // namespace g2lab
