#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "g2lab/config.hpp"
#include "g2lab/report.hpp"

using namespace g2lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "g2lab_test_report_cli";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json without_runtimes(nlohmann::json j) {
    for (auto& c : j["checks"]) c.erase("runtime_ms");
    return j;
}

RunConfig resolve_json(const std::string& text, const ConfigOverrides& flags = {}, const char* env = nullptr) {
    const fs::path p = scratch_dir() / "config.json";
    std::ofstream(p) << text;
    return resolve_config(p.string(), flags, env);
}

} // namespace

TEST_CASE("single-record JSON report") {
    Report r;
    r.suite = "kernel";
    r.model = "flat7";
    r.seed = 3;
    r.checks.push_back(make_record("a.check", "wedge \xE2\x88\xA7 and \xCE\xB4_h", 2e-12, 1e-10, 5));
    const auto j = nlohmann::json::parse(render(r, ReportFormat::Json));
    CHECK(j["suite"] == "kernel");
    CHECK(j["seed"] == 3);
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["id"] == "a.check");
    CHECK(j["checks"][0]["paper_ref"] == "wedge \xE2\x88\xA7 and \xCE\xB4_h");
    CHECK(j["checks"][0]["status"] == "pass");
    CHECK(j["checks"][0]["max_residual"] == 2e-12);
    CHECK(j["checks"][0]["tolerance"] == 1e-10);
    CHECK(j["checks"][0]["sample_count"] == 5);
    CHECK(j["checks"][0].contains("runtime_ms"));
    CHECK(j["summary"]["passed"] == 1);
    CHECK(j["summary"]["failed"] == 0);
}

TEST_CASE("records: failing, NaN and ordering") {
    Report r;
    r.checks.push_back(make_record("z.last", "", 1.0, 0.5, 1));
    r.checks.push_back(make_record("b.nan", "", std::numeric_limits<double>::quiet_NaN(), 1.0, 0));
    r.checks.back().detail = "threw";
    r.checks.push_back(make_record("a.first", "", 0.0, 1.0, 1));
    CHECK_FALSE(r.checks[0].pass);
    CHECK_FALSE(r.checks[1].pass);
    CHECK(r.passed() == 1);
    CHECK(r.failed() == 2);
    const auto j = report_json(r);
    CHECK(j["checks"][0]["id"] == "a.first");
    CHECK(j["checks"][1]["max_residual"].is_null());
    CHECK(j["checks"][1]["detail"] == "threw");
    CHECK_FALSE(j["checks"][0].contains("detail"));
    // An errored check has no residual, so the overall maximum is unknown.
    CHECK(j["summary"]["max_residual_overall"].is_null());
    r.checks.erase(r.checks.begin() + 1);
    CHECK(report_json(r)["summary"]["max_residual_overall"] == 1.0);
}

TEST_CASE("CSV report") {
    Report r;
    for (int i = 0; i < 4; ++i) r.checks.push_back(make_record("c" + std::to_string(i), "ref, with comma", 0.1 * i, 0.25, 2));
    const std::string csv = report_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "id,paper_ref,status,max_residual,tolerance,sample_count,runtime_ms");
    CHECK(lines[1].rfind("c0,\"ref, with comma\",pass,", 0) == 0);
    CHECK(lines[4].find(",fail,") != std::string::npos);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("atomic writes") {
    const fs::path p = scratch_dir() / "atomic.json";
    write_atomic(p.string(), "{}\n");
    CHECK(slurp(p) == "{}\n");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
    CHECK_THROWS_AS(write_atomic("/nonexistent-dir/report.json", "{}"), ConfigError);
}

TEST_CASE("config resolution") {
    const RunConfig d = resolve_json("{}");
    CHECK(d.model == "flat7");
    CHECK(d.suites == std::vector<std::string>{"all"});
    CHECK(d.seed == 0);
    CHECK(d.format == "json");
    CHECK(d.tol == 1.0);
    CHECK_FALSE(d.fd_step.has_value());

    const RunConfig c = resolve_json(R"({"model": "t3k3", "suite": ["kernel", "t3k3"], "seed": 9,
                                         "fd": {"step": 0.002, "richardson": 1}, "tol": 2.5, "format": "csv"})");
    CHECK(c.model == "t3k3");
    CHECK(c.suites == std::vector<std::string>{"kernel", "t3k3"});
    CHECK(c.seed == 9);
    CHECK(*c.fd_step == 0.002);
    CHECK(*c.fd_richardson == 1);
    CHECK(c.format == "csv");

    ConfigOverrides flags;
    flags.fd_step = 0.004;
    flags.seed = 11;
    const RunConfig o = resolve_json(R"({"fd": {"step": 0.002}, "seed": 9})", flags, "17");
    CHECK(*o.fd_step == 0.004);
    CHECK(o.seed == 11);
    CHECK(config_echo(o)["fd"]["step"] == 0.004);

    CHECK(resolve_json(R"({"model": "flat7"})", {}, "17").seed == 17);
    CHECK(resolve_json(R"({"seed": 5})", {}, "17").seed == 5);
    CHECK(resolve_config(std::nullopt, {}, "23").seed == 23);
    CHECK(resolve_config(std::nullopt, {}, nullptr).seed == 0);
}

TEST_CASE("config errors") {
    try {
        resolve_json(R"({"modle": "flat7"})");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("modle") != std::string::npos);
    }
    try {
        resolve_json(R"({"fd": {"stpe": 1}})");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fd.stpe") != std::string::npos);
    }
    CHECK_THROWS_AS(resolve_json("{\"model\": "), ConfigError);
    CHECK_THROWS_AS(resolve_config(std::string("/nonexistent/config.json"), {}, nullptr), ConfigError);
    CHECK_THROWS_AS(resolve_config(std::nullopt, {}, "not-a-number"), ConfigError);

    RunConfig bad;
    bad.suites = {"nope"};
    CHECK_THROWS_AS(expand_suites(bad), ConfigError);
    bad = {};
    bad.model = "k3";
    CHECK_THROWS_AS(expand_suites(bad), ConfigError);
}

TEST_CASE("suite expansion") {
    RunConfig c;
    CHECK(expand_suites(c) == std::vector<std::string>{"kernel", "g2", "flat7", "period"});
    c.model = "t3k3";
    CHECK(expand_suites(c) == std::vector<std::string>{"kernel", "g2", "t3k3"});
}

TEST_CASE("run exit codes") {
    std::ostringstream out, err;

    RunConfig unwritable;
    unwritable.suites = {"kernel"};
    unwritable.out = "/nonexistent-dir/report.json";
    CHECK(run(unwritable, out, err) == 2);
    CHECK_FALSE(fs::exists(unwritable.out));

    RunConfig bad_format;
    bad_format.suites = {"kernel"};
    bad_format.format = "yaml";
    CHECK(run(bad_format, out, err) == 2);

    RunConfig coarse;
    coarse.suites = {"flat7"};
    coarse.fd_step = 0.5;
    const fs::path p = scratch_dir() / "coarse.json";
    coarse.out = p.string();
    CHECK(run(coarse, out, err) == 1);
    const auto j = nlohmann::json::parse(slurp(p));
    CHECK(j["summary"]["failed"].get<int>() > 0);
    CHECK(j["config_echo"]["fd"]["step"] == 0.5);
}

TEST_CASE("reports are deterministic for a fixed seed") {
    RunConfig c;
    c.suites = {"kernel"};
    c.seed = 4;
    std::ostringstream a, b, err;
    CHECK(run(c, a, err) == 0);
    CHECK(run(c, b, err) == 0);
    CHECK(without_runtimes(nlohmann::json::parse(a.str())) == without_runtimes(nlohmann::json::parse(b.str())));
    c.seed = 5;
    std::ostringstream other;
    CHECK(run(c, other, err) == 0);
    CHECK(without_runtimes(nlohmann::json::parse(a.str())) != without_runtimes(nlohmann::json::parse(other.str())));
}
