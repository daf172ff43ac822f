#include "berger/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace berger {

namespace {

using Entries = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

void put(Entries& out, const std::string& key, const std::string& value, int line) {
    if (!out.emplace(key, value).second)
        throw ConfigError("duplicate key '" + key + "'" + (line > 0 ? " on line " + std::to_string(line) : ""));
}

/// '#' starts a comment unless it sits inside quotes.
std::string strip_comment(const std::string& line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quote) {
            if (ch == quote) quote = 0;
        } else if (ch == '"' || ch == '\'') {
            quote = ch;
        } else if (ch == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

Entries parse_key_value(const std::string& text) {
    Entries out;
    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header on line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value' on line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key on line " + std::to_string(lineno));
        put(out, section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)), lineno);
    }
    return out;
}

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw ConfigError("key '" + key + "' must hold a scalar or a list of scalars");
}

void flatten(const nlohmann::json& j, const std::string& prefix, Entries& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        const auto& v = it.value();
        if (v.is_object()) {
            flatten(v, key, out);
        } else if (v.is_array()) {
            std::string joined;
            for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar_text(e, key);
            put(out, key, joined, 0);
        } else if (!v.is_null()) {
            put(out, key, scalar_text(v, key), 0);
        }
    }
}

Entries parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("JSON config must be an object");
    Entries out;
    flatten(j, "", out);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    const std::string s = unquote(v);
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != static_cast<int>(x)) throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string s = unquote(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::string> to_list(const std::string& v) {
    std::vector<std::string> out;
    std::string s = trim(v);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = unquote(trim(item));
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&t](const char* key, double RunConfig::*field) {
            t[key] = [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = to_double(k, v); };
        };
        num("model.kappa", &RunConfig::kappa);
        num("model.tau", &RunConfig::tau);
        t["chart"] = t["model.chart"] = [](RunConfig& c, const std::string&, const std::string& v) {
            c.chart = unquote(v);
        };
        t["surface.kind"] = [](RunConfig& c, const std::string&, const std::string& v) { c.surface.kind = unquote(v); };
        t["surface.curve"] = [](RunConfig& c, const std::string&, const std::string& v) { c.surface.curve = unquote(v); };
        auto snum = [&t](const char* key, double SurfaceConfig::*field) {
            t[key] = [field](RunConfig& c, const std::string& k, const std::string& v) {
                c.surface.*field = to_double(k, v);
            };
        };
        snum("surface.r", &SurfaceConfig::r);
        snum("surface.epsilon", &SurfaceConfig::epsilon);
        snum("surface.radius", &SurfaceConfig::radius);
        snum("surface.half_length", &SurfaceConfig::half_length);
        snum("surface.height", &SurfaceConfig::height);
        snum("surface.half_width", &SurfaceConfig::half_width);
        t["surface.mode"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const auto items = to_list(v);
            if (items.size() != 2) throw ConfigError("surface.mode expects two integers 'm, n'");
            c.surface.mode = {to_int(k, items[0]), to_int(k, items[1])};
        };
        t["grid.Nu"] = t["grid.nu"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.nu = to_int(k, v); };
        t["grid.Nv"] = t["grid.nv"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.nv = to_int(k, v); };
        t["grid.N"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.nu = c.nv = to_int(k, v); };
        t["checks"] = [](RunConfig& c, const std::string&, const std::string& v) { c.checks = to_list(v); };
        t["flow.enabled"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.enabled = to_bool(k, v); };
        t["flow.kind"] = [](RunConfig& c, const std::string&, const std::string& v) { c.flow.kind = unquote(v); };
        t["flow.r0"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.r0 = to_double(k, v); };
        t["flow.max_steps"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.flow.max_steps = to_int(k, v);
        };
        t["flow.tol"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.flow.tol = to_double(k, v); };
        t["tolerance.pointwise"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.tol_pointwise = to_double(k, v);
        };
        t["tolerance.integral"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.tol_integral = to_double(k, v);
        };
        t["check"] = t["convergence.check"] = [](RunConfig& c, const std::string&, const std::string& v) {
            c.convergence_check = unquote(v);
        };
        t["convergence.grids"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.convergence_grids.clear();
            for (const auto& item : to_list(v)) c.convergence_grids.push_back(to_int(k, item));
        };
        t["output.json"] = [](RunConfig& c, const std::string&, const std::string& v) { c.json_path = unquote(v); };
        t["output.csv"] = [](RunConfig& c, const std::string&, const std::string& v) { c.csv_path = unquote(v); };
        return t;
    }();
    return table;
}

void validate(const RunConfig& c) {
    (void)model_of(c);
    static const std::vector<std::string> kinds{"hopf_torus", "clifford", "critical_torus",
                                                "perturbed",  "cylinder", "slice"};
    if (std::find(kinds.begin(), kinds.end(), c.surface.kind) == kinds.end())
        throw ConfigError("unknown surface.kind '" + c.surface.kind + "'");
    if (!c.chart.empty() && c.chart != "hopf" && c.chart != "bcv")
        throw ConfigError("chart must be 'hopf' or 'bcv'");
    if (c.surface.curve != "circle" && c.surface.curve != "line")
        throw ConfigError("surface.curve must be 'circle' or 'line'");
    if (c.flow.kind != "radius" && c.flow.kind != "graph") throw ConfigError("flow.kind must be 'radius' or 'graph'");
    if (c.flow.max_steps < 0) throw ConfigError("flow.max_steps must be >= 0");
    if (!(c.flow.tol > 0.0)) throw ConfigError("flow.tol must be positive");
    if (c.tol_pointwise && !(*c.tol_pointwise > 0.0)) throw ConfigError("tolerance.pointwise must be positive");
    if (c.tol_integral && !(*c.tol_integral > 0.0)) throw ConfigError("tolerance.integral must be positive");
    if (c.checks.empty()) throw ConfigError("checks must name at least one check or 'all'");
    if (c.convergence_grids.size() < 2) throw ConfigError("convergence.grids needs at least two resolutions");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const std::string body = trim(text);
    const Entries entries = !body.empty() && body.front() == '{' ? parse_json(text) : parse_key_value(text);
    RunConfig cfg;
    for (const auto& [key, value] : entries) {
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
        it->second(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["model"] = {{"kappa", c.kappa}, {"tau", c.tau}};
    j["chart"] = c.chart;
    const auto& s = c.surface;
    j["surface"] = {{"kind", s.kind},       {"r", s.r},
                    {"epsilon", s.epsilon}, {"mode", {s.mode.first, s.mode.second}},
                    {"curve", s.curve},     {"radius", s.radius},
                    {"half_length", s.half_length}, {"height", s.height},
                    {"half_width", s.half_width}};
    j["grid"] = {{"Nu", c.nu}, {"Nv", c.nv}};
    j["checks"] = c.checks;
    j["flow"] = {{"enabled", c.flow.enabled},
                 {"kind", c.flow.kind},
                 {"r0", c.flow.r0},
                 {"max_steps", c.flow.max_steps},
                 {"tol", c.flow.tol}};
    j["tolerance"] = {{"pointwise", c.tol_pointwise ? nlohmann::ordered_json(*c.tol_pointwise) : nullptr},
                      {"integral", c.tol_integral ? nlohmann::ordered_json(*c.tol_integral) : nullptr}};
    j["convergence"] = {{"check", c.convergence_check}, {"grids", c.convergence_grids}};
    return j;
}

ModelParams model_of(const RunConfig& cfg) { return ModelParams(cfg.kappa, cfg.tau); }

Immersion build_surface(const RunConfig& cfg) {
    const ModelParams m = model_of(cfg);
    const SurfaceConfig& s = cfg.surface;
    Immersion imm;
    if (s.kind == "hopf_torus") imm = hopf_torus(HopfTorusSpec(s.r, m));
    else if (s.kind == "clifford") imm = clifford_torus(m);
    else if (s.kind == "critical_torus") imm = hopf_torus(HopfTorusSpec(critical_radius(m).r, m));
    else if (s.kind == "perturbed") imm = perturbed_torus(HopfTorusSpec(s.r, m), s.epsilon, s.mode);
    else if (s.kind == "cylinder")
        imm = hopf_cylinder(s.curve == "line" ? CurveSpec::line(s.half_length) : CurveSpec::circle(s.radius), m,
                            s.height);
    else if (s.kind == "slice") imm = product_slice(m, s.half_width);
    else throw ConfigError("unknown surface.kind '" + s.kind + "'");
    if (!cfg.chart.empty() && cfg.chart != to_string(imm.chart.kind))
        throw ConfigError("surface '" + s.kind + "' lives in the " + to_string(imm.chart.kind) + " chart, not '" +
                          cfg.chart + "'");
    return imm;
}

}  // namespace berger
