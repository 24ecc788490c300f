#include "g2lab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace g2lab {

namespace {

const std::set<std::string> kModels{"flat7", "full35", "t3k3"};

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown config key '" + prefix + key + "'");
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(what + " is not an unsigned 64-bit integer: '" + text + "'");
    return v;
}

template <typename T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

Eigen::MatrixXd matrix_from(const nlohmann::json& v, const std::string& key) {
    if (!v.is_array() || v.empty()) throw ConfigError("config key '" + key + "' must be a non-empty matrix");
    const auto rows = static_cast<Eigen::Index>(v.size());
    const auto cols = static_cast<Eigen::Index>(v[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!v[i].is_array() || static_cast<Eigen::Index>(v[i].size()) != cols)
            throw ConfigError("config key '" + key + "' is not a rectangular matrix");
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get_as<double>(v[i][j], key);
    }
    return m;
}

void apply_t3k3(RunConfig& cfg, const nlohmann::json& t) {
    if (!t.is_object()) throw ConfigError("config key 't3k3' must be an object");
    reject_unknown(t, {"dims", "Q", "base"}, "t3k3.");
    if (t.contains("dims")) {
        const auto dims = get_as<std::vector<int>>(t["dims"], "t3k3.dims");
        if (dims.size() != 3) throw ConfigError("config key 't3k3.dims' needs three entries");
        std::copy(dims.begin(), dims.end(), cfg.t3k3.dims.begin());
    }
    if (t.contains("Q")) {
        const auto& q = t["Q"];
        if (!q.is_array() || q.size() != 3) throw ConfigError("config key 't3k3.Q' needs three matrices");
        for (int i = 0; i < 3; ++i)
            cfg.t3k3.Q[i] = q[i].is_null() ? Eigen::MatrixXd() : matrix_from(q[i], "t3k3.Q");
    }
    if (t.contains("base")) {
        const auto base = get_as<std::vector<double>>(t["base"], "t3k3.base");
        cfg.t3k3.base = Eigen::Map<const Eigen::VectorXd>(base.data(), static_cast<Eigen::Index>(base.size()));
    }
    for (const auto& [key, value] : t.items()) cfg.t3k3_json[key] = value;
}

} // namespace

void apply_config_json(RunConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, {"model", "suite", "seed", "fd", "tol", "out", "format", "t3k3"}, "");
    if (doc.contains("model")) cfg.model = get_as<std::string>(doc["model"], "model");
    if (doc.contains("suite")) {
        const auto& s = doc["suite"];
        cfg.suites = s.is_array() ? get_as<std::vector<std::string>>(s, "suite")
                                  : std::vector<std::string>{get_as<std::string>(s, "suite")};
    }
    if (doc.contains("seed")) {
        const auto& s = doc["seed"];
        if (s.is_string()) cfg.seed = parse_seed(s.get<std::string>(), "config key 'seed'");
        else if (s.is_number_unsigned()) cfg.seed = s.get<std::uint64_t>();
        else throw ConfigError("config key 'seed' must be an unsigned integer");
    }
    if (doc.contains("fd")) {
        const auto& fd = doc["fd"];
        if (!fd.is_object()) throw ConfigError("config key 'fd' must be an object");
        reject_unknown(fd, {"step", "richardson"}, "fd.");
        if (fd.contains("step")) cfg.fd_step = get_as<double>(fd["step"], "fd.step");
        if (fd.contains("richardson")) cfg.fd_richardson = get_as<int>(fd["richardson"], "fd.richardson");
    }
    if (doc.contains("tol")) cfg.tol = get_as<double>(doc["tol"], "tol");
    if (doc.contains("out")) cfg.out = get_as<std::string>(doc["out"], "out");
    if (doc.contains("format")) cfg.format = get_as<std::string>(doc["format"], "format");
    if (doc.contains("t3k3")) apply_t3k3(cfg, doc["t3k3"]);
}

RunConfig resolve_config(const std::optional<std::string>& config_path, const ConfigOverrides& flags,
                         const char* env_seed) {
    RunConfig cfg;
    if (env_seed && *env_seed) cfg.seed = parse_seed(env_seed, "G2LAB_SEED");
    if (config_path) {
        std::ifstream f(*config_path);
        if (!f) throw ConfigError("cannot read config file '" + *config_path + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(f);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("malformed config file '" + *config_path + "': " + e.what());
        }
        apply_config_json(cfg, doc);
    }
    if (flags.model) cfg.model = *flags.model;
    if (flags.suites) cfg.suites = *flags.suites;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.fd_step) cfg.fd_step = *flags.fd_step;
    if (flags.tol) cfg.tol = *flags.tol;
    if (flags.out) cfg.out = *flags.out;
    if (flags.format) cfg.format = *flags.format;
    return cfg;
}

std::vector<std::string> expand_suites(const RunConfig& cfg) {
    if (!kModels.count(cfg.model)) throw ConfigError("unknown model '" + cfg.model + "'");
    const auto& known = suite_names();
    std::vector<std::string> out;
    const auto add = [&](const std::string& s) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    for (const std::string& s : cfg.suites) {
        if (s == "all") {
            add("kernel");
            add("g2");
            add(cfg.model);
            if (cfg.model == "flat7") add("period");
        } else if (std::find(known.begin(), known.end(), s) != known.end()) {
            add(s);
        } else {
            throw ConfigError("unknown suite '" + s + "'");
        }
    }
    if (out.empty()) throw ConfigError("no suite selected");
    return out;
}

nlohmann::ordered_json config_echo(const RunConfig& cfg) {
    nlohmann::ordered_json fd = nlohmann::ordered_json::object();
    fd["step"] = cfg.fd_step ? nlohmann::ordered_json(*cfg.fd_step) : nlohmann::ordered_json(nullptr);
    fd["richardson"] = cfg.fd_richardson ? nlohmann::ordered_json(*cfg.fd_richardson) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json echo;
    echo["model"] = cfg.model;
    echo["suite"] = cfg.suites;
    echo["seed"] = cfg.seed;
    echo["fd"] = fd;
    echo["tol"] = cfg.tol;
    echo["out"] = cfg.out;
    echo["format"] = cfg.format;
    echo["t3k3"] = cfg.t3k3_json;
    return echo;
}

Report run_report(const RunConfig& cfg) {
    const std::vector<std::string> suites = expand_suites(cfg);
    parse_format(cfg.format);
    if (!(cfg.tol > 0.0)) throw ConfigError("tolerance scale must be positive");
    if (cfg.fd_step || cfg.fd_richardson) {
        (void)FDScheme(cfg.fd_step.value_or(1e-2), cfg.fd_richardson.value_or(0));
    }
    SuiteOptions options;
    options.seed = cfg.seed;
    options.fd_step = cfg.fd_step;
    options.fd_richardson = cfg.fd_richardson;
    options.tol_scale = cfg.tol;
    options.t3k3 = cfg.t3k3;
    if (std::find(suites.begin(), suites.end(), "t3k3") != suites.end()) (void)T3K3Chart(cfg.t3k3);

    Report report;
    for (std::size_t i = 0; i < suites.size(); ++i) report.suite += (i ? "," : "") + suites[i];
    report.model = cfg.model;
    report.seed = cfg.seed;
    report.config_echo = config_echo(cfg);
    for (const std::string& s : suites) {
        std::vector<CheckRecord> records = run_suite(s, options);
        report.checks.insert(report.checks.end(), records.begin(), records.end());
    }
    return report;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Report report = run_report(cfg);
        const std::string text = render(report, parse_format(cfg.format));
        if (cfg.out.empty()) out << text;
        else write_atomic(cfg.out, text);
        err << report.passed() << " passed, " << report.failed() << " failed\n";
        return report.failed() == 0 ? 0 : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace g2lab
