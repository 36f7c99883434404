#include "optosync/params.hpp"

#include "optosync/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace optosync {

namespace {

std::map<std::string, double SystemParams::*> field_map() {
    return {
        {"omega_m", &SystemParams::omega_m},   {"delta_m", &SystemParams::delta_m},
        {"delta", &SystemParams::delta},       {"kappa", &SystemParams::kappa},
        {"gamma_m1", &SystemParams::gamma_m1}, {"gamma_m2", &SystemParams::gamma_m2},
        {"g", &SystemParams::g},               {"drive_e", &SystemParams::drive_e},
        {"mod_omega", &SystemParams::mod_omega}, {"mod_eps", &SystemParams::mod_eps},
        {"n_ph", &SystemParams::n_ph},         {"n_m1", &SystemParams::n_m1},
        {"n_m2", &SystemParams::n_m2},
    };
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters in number: '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
}

} // namespace

void SystemParams::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid parameters: " + what);
    };
    require(kappa > 0.0, "kappa must be > 0");
    require(gamma_m1 > 0.0, "gamma_m1 must be > 0");
    require(gamma_m2 > 0.0, "gamma_m2 must be > 0");
    require(omega_m > 0.0, "omega_m must be > 0");
    require(omega_m + delta_m > 0.0, "omega_m + delta_m must be > 0");
    require(mod_eps >= 0.0, "mod_eps must be >= 0");
    require(n_ph >= 0.0 && n_m1 >= 0.0 && n_m2 >= 0.0, "occupancies must be >= 0");
}

void apply_param_override(SystemParams& p, const std::string& key, const std::string& value) {
    auto fields = field_map();
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("unknown parameter key '" + key + "'");
    p.*(it->second) = parse_number(value);
}

SystemParams params_from_string(const std::string& text) {
    SystemParams p;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad JSON config: ") + e.what());
        }
        if (!j.is_object()) throw ConfigError("JSON config must be a flat object");
        auto fields = field_map();
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto f = fields.find(it.key());
            if (f == fields.end()) throw ConfigError("unknown parameter key '" + it.key() + "'");
            if (!it.value().is_number()) throw ConfigError("key '" + it.key() + "' must be a number");
            p.*(f->second) = it.value().get<double>();
        }
    } else {
        std::istringstream in(body);
        std::string line;
        while (std::getline(in, line)) {
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'");
            apply_param_override(p, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
    p.validate();
    return p;
}

SystemParams params_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return params_from_string(ss.str());
}

std::map<std::string, double> params_to_map(const SystemParams& p) {
    std::map<std::string, double> m;
    for (const auto& [k, field] : field_map()) m[k] = p.*field;
    return m;
}

} // namespace optosync
