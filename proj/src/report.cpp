#include "g2lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace g2lab {

CheckRecord make_record(std::string id, std::string paper_ref, double residual, double tolerance, int samples) {
    CheckRecord r;
    r.id = std::move(id);
    r.paper_ref = std::move(paper_ref);
    r.max_residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.sample_count = samples;
    return r;
}

int Report::passed() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; }));
}

int Report::failed() const { return static_cast<int>(checks.size()) - passed(); }

ReportFormat parse_format(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("unknown report format '" + name + "'");
}

namespace {

std::vector<CheckRecord> sorted_checks(const Report& report) {
    std::vector<CheckRecord> out = report.checks;
    std::stable_sort(out.begin(), out.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
    return out;
}

nlohmann::ordered_json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

nlohmann::ordered_json report_json(const Report& report) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    double worst = 0.0;
    bool any_nan = false;
    for (const CheckRecord& c : sorted_checks(report)) {
        nlohmann::ordered_json j;
        j["id"] = c.id;
        j["paper_ref"] = c.paper_ref;
        j["status"] = c.pass ? "pass" : "fail";
        j["max_residual"] = number_or_null(c.max_residual);
        j["tolerance"] = c.tolerance;
        j["sample_count"] = c.sample_count;
        j["runtime_ms"] = c.runtime_ms;
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
        if (std::isnan(c.max_residual)) any_nan = true;
        else worst = std::max(worst, c.max_residual);
    }
    nlohmann::ordered_json out;
    out["suite"] = report.suite;
    out["model"] = report.model;
    out["seed"] = report.seed;
    out["config_echo"] = report.config_echo;
    out["checks"] = std::move(checks);
    out["summary"] = {{"passed", report.passed()},
                      {"failed", report.failed()},
                      {"max_residual_overall", any_nan ? nlohmann::ordered_json(nullptr) : number_or_null(worst)}};
    return out;
}

std::string report_csv(const Report& report) {
    std::ostringstream os;
    os << "id,paper_ref,status,max_residual,tolerance,sample_count,runtime_ms\n";
    for (const CheckRecord& c : sorted_checks(report))
        os << csv_field(c.id) << ',' << csv_field(c.paper_ref) << ',' << (c.pass ? "pass" : "fail") << ','
           << csv_number(c.max_residual) << ',' << csv_number(c.tolerance) << ',' << c.sample_count << ','
           << csv_number(c.runtime_ms) << '\n';
    return os.str();
}

std::string render(const Report& report, ReportFormat format) {
    if (format == ReportFormat::Csv) return report_csv(report);
    return report_json(report).dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write report to '" + path + "'");
        f << content;
        f.close();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ConfigError("cannot write report to '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigError("cannot move report into '" + path + "'");
    }
}

// object views

nlohmann::ordered_json to_json(const Form& form) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    const auto& masks = monomial_masks(form.degree());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const double c = form.coeffs()[static_cast<Eigen::Index>(i)];
        out.push_back({{"index", MultiIndex::from_mask(masks[i]).to_string()}, {"coeff", c}});
    }
    return out;
}

nlohmann::ordered_json to_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

nlohmann::ordered_json to_json(const G2Frame& frame) {
    return {{"metric", to_json(Eigen::MatrixXd(frame.metric().gram()))},
            {"volume_density", frame.volume_density()},
            {"theta", to_json(frame.theta())}};
}

namespace {

template <int Rank>
nlohmann::ordered_json tensor_slice(const Eigen::Tensor<double, Rank>& t, std::array<Eigen::Index, Rank>& idx, int depth) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < t.dimension(depth); ++i) {
        idx[depth] = i;
        if (depth + 1 == Rank) out.push_back(t(idx));
        else out.push_back(tensor_slice<Rank>(t, idx, depth + 1));
    }
    return out;
}

} // namespace

template <int Rank>
nlohmann::ordered_json tensor_json(const Eigen::Tensor<double, Rank>& t) {
    std::array<Eigen::Index, Rank> idx{};
    return tensor_slice<Rank>(t, idx, 0);
}

template nlohmann::ordered_json tensor_json<3>(const Tensor3&);
template nlohmann::ordered_json tensor_json<4>(const Tensor4&);
template nlohmann::ordered_json tensor_json<5>(const Tensor5&);

nlohmann::ordered_json to_json(const HodgePoint& point) {
    nlohmann::ordered_json blocks;
    for (int p = 3; p >= 0; --p) blocks["H" + std::to_string(p)] = to_json(point.H(p));
    const int half = static_cast<int>(point.H(3).rows()) / 2;
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (int a = 0; a < half; ++a) labels.push_back("c" + std::to_string(a));
    for (int a = 0; a < half; ++a) labels.push_back("d" + std::to_string(a));
    return {{"basis", labels}, {"blocks", blocks}};
}

nlohmann::ordered_json to_json(const TangentRep& xi) { return {{"a", to_json(xi.a)}}; }

} // namespace g2lab
