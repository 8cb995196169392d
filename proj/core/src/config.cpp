#include "epb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "epb/errors.hpp"

extern char** environ;

namespace epb {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    return x;
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_double(key, value);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

std::vector<std::pair<double, double>> load_table(const std::string& key, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config key '" + key + "': cannot open table file '" + path + "'");
    std::vector<std::pair<double, double>> table;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, v;
        if (!(row >> x >> v))
            throw ConfigError("config key '" + key + "': bad table row '" + line + "'");
        table.emplace_back(x, v);
    }
    if (table.size() < 2)
        throw ConfigError("config key '" + key + "': table needs at least 2 rows");
    return table;
}

RhoPreset parse_rho_preset(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "one_minus_a_sech_bx") return RhoPreset::OneMinusASechBx;
    if (v == "one_plus_sech") return RhoPreset::OnePlusSech;
    if (v == "constant") return RhoPreset::Constant;
    if (v == "cosine_mode") return RhoPreset::CosineMode;
    if (v == "custom_table") return RhoPreset::CustomTable;
    throw ConfigError("config key '" + key + "': unknown density preset '" + value + "'");
}

UPreset parse_u_preset(const std::string& key, const std::string& value) {
    const std::string v = lower(value);
    if (v == "zero") return UPreset::Zero;
    if (v == "sech") return UPreset::Sech;
    if (v == "cosine_mode") return UPreset::CosineMode;
    if (v == "custom_table") return UPreset::CustomTable;
    throw ConfigError("config key '" + key + "': unknown velocity preset '" + value + "'");
}

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

KeyValueList parse_kv_text(const std::string& text, const std::string& origin) {
    KeyValueList out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, value);
    }
    return out;
}

KeyValueList parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str(), path);
}

void apply_config_key(ScenarioConfig& config, const std::string& key, const std::string& value) {
    Scenario& s = config.scenario;
    const std::string k = lower(key);
    if (k == "model.k") s.K = parse_double(key, value);
    else if (k == "grid.n") s.n = parse_int(key, value);
    else if (k == "grid.length") s.length = parse_double(key, value);
    else if (k == "time.dt") s.dt = parse_double(key, value);
    else if (k == "time.t_end") s.t_end = parse_double(key, value);
    else if (k == "time.output_stride") s.output_stride = parse_int(key, value);
    else if (k == "time.snapshot_stride") s.snapshot_stride = parse_int(key, value);
    else if (k == "init.preset") s.init.rho_preset = parse_rho_preset(key, value);
    else if (k == "init.a") s.init.a = parse_double(key, value);
    else if (k == "init.b") s.init.b = parse_double(key, value);
    else if (k == "init.u_preset") s.init.u_preset = parse_u_preset(key, value);
    else if (k == "init.u_amp") s.init.u_amp = parse_double(key, value);
    else if (k == "init.cosine_amp") s.init.cosine_amp = parse_double(key, value);
    else if (k == "init.cosine_mode") s.init.cosine_mode = parse_int(key, value);
    else if (k == "init.rho_table") s.init.rho_table = load_table(key, value);
    else if (k == "init.u_table") s.init.u_table = load_table(key, value);
    else if (k == "solver.poisson_tol") s.poisson_tol = parse_double(key, value);
    else if (k == "solver.picard_tol") s.picard_tol = parse_double(key, value);
    else if (k == "solver.picard_max_iterations") s.picard_max_iterations = parse_int(key, value);
    else if (k == "solver.blowup_threshold") s.blowup_threshold = parse_double(key, value);
    else if (k == "solver.dealias") s.dealias = parse_bool(key, value);
    else if (k == "run.lagrangian_crosscheck") config.lagrangian_crosscheck = parse_bool(key, value);
    else if (k == "criteria.t0") config.criteria_T0 = parse_double(key, value);
    else if (k == "criteria.eps") config.criteria_eps = parse_double(key, value);
    else if (k == "criteria.delta0") config.criteria_delta0 = parse_double(key, value);
    else if (k == "outputs.diagnostics") config.diagnostics_filename = value;
    else if (k == "outputs.snapshot_prefix") config.snapshot_prefix = value;
    else if (k == "outputs.summary") config.summary_filename = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

ScenarioConfig scenario_config_from_kv(const KeyValueList& kv) {
    ScenarioConfig config;
    for (const auto& [key, value] : kv) apply_config_key(config, key, value);
    config.scenario.validate();
    return config;
}

KeyValueList environment_overrides() {
    KeyValueList out;
    for (char** env = environ; *env; ++env) {
        const std::string entry(*env);
        if (entry.rfind("EPB_", 0) != 0) continue;
        const size_t eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string name = entry.substr(4, eq - 4);
        const std::string value = entry.substr(eq + 1);
        const size_t us = name.find('_');
        if (us == std::string::npos) continue;
        std::string key = lower(name.substr(0, us)) + "." + lower(name.substr(us + 1));
        out.emplace_back(std::move(key), value);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    KeyValueList kv = parse_kv_file(path);
    const KeyValueList env = environment_overrides();
    kv.insert(kv.end(), env.begin(), env.end());
    return scenario_config_from_kv(kv);
}

std::string to_kv_text(const ScenarioConfig& config) {
    const Scenario& s = config.scenario;
    std::ostringstream out;
    out << "model.K = " << g17(s.K) << "\n";
    out << "grid.n = " << s.n << "\n";
    out << "grid.length = " << g17(s.length) << "\n";
    out << "time.dt = " << g17(s.dt) << "\n";
    out << "time.t_end = " << g17(s.t_end) << "\n";
    out << "time.output_stride = " << s.output_stride << "\n";
    out << "time.snapshot_stride = " << s.snapshot_stride << "\n";
    switch (s.init.rho_preset) {
        case RhoPreset::OneMinusASechBx:
            out << "init.preset = one_minus_a_sech_bx\n";
            out << "init.a = " << g17(s.init.a) << "\n";
            out << "init.b = " << g17(s.init.b) << "\n";
            break;
        case RhoPreset::OnePlusSech: out << "init.preset = one_plus_sech\n"; break;
        case RhoPreset::Constant: out << "init.preset = constant\n"; break;
        case RhoPreset::CosineMode:
            out << "init.preset = cosine_mode\n";
            out << "init.cosine_amp = " << g17(s.init.cosine_amp) << "\n";
            out << "init.cosine_mode = " << s.init.cosine_mode << "\n";
            break;
        case RhoPreset::CustomTable: out << "init.preset = custom_table\n"; break;
    }
    switch (s.init.u_preset) {
        case UPreset::Zero: out << "init.u_preset = zero\n"; break;
        case UPreset::Sech:
            out << "init.u_preset = sech\n";
            out << "init.u_amp = " << g17(s.init.u_amp) << "\n";
            break;
        case UPreset::CosineMode: out << "init.u_preset = cosine_mode\n"; break;
        case UPreset::CustomTable: out << "init.u_preset = custom_table\n"; break;
    }
    out << "solver.poisson_tol = " << g17(s.poisson_tol) << "\n";
    out << "solver.picard_tol = " << g17(s.picard_tol) << "\n";
    out << "solver.picard_max_iterations = " << s.picard_max_iterations << "\n";
    out << "solver.blowup_threshold = " << g17(s.blowup_threshold) << "\n";
    out << "solver.dealias = " << (s.dealias ? "true" : "false") << "\n";
    out << "run.lagrangian_crosscheck = " << (config.lagrangian_crosscheck ? "true" : "false")
        << "\n";
    if (s.K > 0.0) {
        out << "criteria.T0 = " << g17(config.criteria_T0) << "\n";
        out << "criteria.eps = " << g17(config.criteria_eps) << "\n";
        out << "criteria.delta0 = " << g17(config.criteria_delta0) << "\n";
    }
    out << "outputs.diagnostics = " << config.diagnostics_filename << "\n";
    out << "outputs.snapshot_prefix = " << config.snapshot_prefix << "\n";
    out << "outputs.summary = " << config.summary_filename << "\n";
    return out.str();
}

}  // namespace epb
