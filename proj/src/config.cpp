#include "uwac/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace uwac {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* scope) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return it.key() == k; });
        if (!known) {
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " +
                              scope);
        }
    }
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string("'") + key + "' must be a number");
    }
    return v.get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(std::string("'") + key + "' must be an integer");
    }
    return v.get<int>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) {
        throw ConfigError(std::string("'") + key + "' must be a string");
    }
    return v.get<std::string>();
}

AxisSpec parse_axis(const json& j, const char* scope) {
    if (!j.is_object()) {
        throw ConfigError(std::string(scope) + " must be an object");
    }
    check_keys(j, {"min", "max", "points", "spacing"}, scope);
    AxisSpec axis;
    axis.min = get_number(j, "min", 0.0);
    axis.max = get_number(j, "max", 0.0);
    axis.points = get_int(j, "points", 0);
    const std::string spacing = get_string(j, "spacing", "log");
    if (spacing == "log") {
        axis.log_spacing = true;
    } else if (spacing == "linear") {
        axis.log_spacing = false;
    } else {
        throw ConfigError("spacing must be 'log' or 'linear', got '" + spacing + "'");
    }
    return axis;
}

json axis_json(const AxisSpec& a) {
    return json{{"min", a.min},
                {"max", a.max},
                {"points", a.points},
                {"spacing", a.log_spacing ? "log" : "linear"}};
}

}  // namespace

std::vector<double> AxisSpec::values() const {
    if (points < 2) {
        throw ConfigError("axis needs at least 2 points");
    }
    if (log_spacing) {
        return log_spaced(min, max, points);
    }
    if (!(max > min)) {
        throw ConfigError("axis needs max > min");
    }
    std::vector<double> v(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        v[static_cast<size_t>(i)] = min + (max - min) * i / (points - 1);
    }
    v.front() = min;
    v.back() = max;
    return v;
}

SweepSpec SweepConfig::make_spec() const {
    if (!case_preset.empty() && has_axes) {
        throw ConfigError("sweep accepts a case preset or explicit axes, not both");
    }
    if (!case_preset.empty()) {
        if (case_preset == "case1") return SweepSpec::case1();
        if (case_preset == "case2") return SweepSpec::case2();
        throw ConfigError("unknown sweep case '" + case_preset + "'");
    }
    if (!has_axes) {
        throw ConfigError("sweep grid not configured: set 'case' or axes");
    }
    SweepSpec spec;
    spec.l_values_km = l_km.values();
    spec.c_values_kbps = c_kbps.values();
    return spec;
}

void RunConfig::validate() const {
    env.validate();
    solver.validate();
    if (output_dir.empty()) {
        throw ConfigError("output_dir must not be empty");
    }
}

RunConfig parse_run_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    try {
        check_keys(j, {"env", "solver", "sweep", "fit", "output_dir"}, "config");
        RunConfig cfg;
        if (j.contains("env")) {
            const json& e = j.at("env");
            if (!e.is_object()) throw ConfigError("'env' must be an object");
            check_keys(e, {"spreading_k", "shipping_s", "wind_w"}, "env");
            cfg.env.spreading_k = get_number(e, "spreading_k", cfg.env.spreading_k);
            cfg.env.shipping_s = get_number(e, "shipping_s", cfg.env.shipping_s);
            cfg.env.wind_w = get_number(e, "wind_w", cfg.env.wind_w);
        }
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            if (!s.is_object()) throw ConfigError("'solver' must be an object");
            check_keys(s,
                       {"f_min_khz", "f_max_khz", "grid_points", "capacity_rel_tol",
                        "capacity_abs_tol_kbps", "band_edge_rel_tol", "k_max_factor",
                        "root_mode", "epsilon_db", "quadrature", "max_iterations"},
                       "solver");
            SolverSettings& st = cfg.solver;
            st.f_min_khz = get_number(s, "f_min_khz", st.f_min_khz);
            st.f_max_khz = get_number(s, "f_max_khz", st.f_max_khz);
            st.grid_points = get_int(s, "grid_points", st.grid_points);
            st.capacity_rel_tol = get_number(s, "capacity_rel_tol", st.capacity_rel_tol);
            st.capacity_abs_tol_kbps =
                get_number(s, "capacity_abs_tol_kbps", st.capacity_abs_tol_kbps);
            st.band_edge_rel_tol =
                get_number(s, "band_edge_rel_tol", st.band_edge_rel_tol);
            st.k_max_factor = get_number(s, "k_max_factor", st.k_max_factor);
            st.epsilon_db = get_number(s, "epsilon_db", st.epsilon_db);
            st.max_iterations = get_int(s, "max_iterations", st.max_iterations);
            const std::string mode = get_string(
                s, "root_mode",
                st.root_mode == SolverSettings::RootMode::bisection
                    ? "bisection"
                    : "epsilon_increment");
            if (mode == "bisection") {
                st.root_mode = SolverSettings::RootMode::bisection;
            } else if (mode == "epsilon_increment") {
                st.root_mode = SolverSettings::RootMode::epsilon_increment;
            } else {
                throw ConfigError("root_mode must be 'bisection' or "
                                  "'epsilon_increment', got '" + mode + "'");
            }
            const std::string quad = get_string(
                s, "quadrature",
                st.quadrature == SolverSettings::Quadrature::trapezoid ? "trapezoid"
                                                                       : "simpson");
            if (quad == "trapezoid") {
                st.quadrature = SolverSettings::Quadrature::trapezoid;
            } else if (quad == "simpson") {
                st.quadrature = SolverSettings::Quadrature::simpson;
            } else {
                throw ConfigError("quadrature must be 'trapezoid' or 'simpson', got '" +
                                  quad + "'");
            }
        }
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            if (!s.is_object()) throw ConfigError("'sweep' must be an object");
            check_keys(s, {"case", "l_km", "c_kbps", "threads"}, "sweep");
            cfg.sweep.case_preset = get_string(s, "case", "");
            const bool has_l = s.contains("l_km");
            const bool has_c = s.contains("c_kbps");
            if (has_l != has_c) {
                throw ConfigError("sweep axes l_km and c_kbps must be set together");
            }
            if (has_l) {
                cfg.sweep.has_axes = true;
                cfg.sweep.l_km = parse_axis(s.at("l_km"), "sweep.l_km");
                cfg.sweep.c_kbps = parse_axis(s.at("c_kbps"), "sweep.c_kbps");
            }
            const int threads = get_int(s, "threads", 0);
            if (threads < 0) throw ConfigError("threads must be >= 0");
            cfg.sweep.threads = static_cast<unsigned>(threads);
        }
        if (j.contains("fit")) {
            const json& f = j.at("fit");
            if (!f.is_object()) throw ConfigError("'fit' must be an object");
            check_keys(f, {"power_a1_c_plus_one"}, "fit");
            if (f.contains("power_a1_c_plus_one")) {
                const json& v = f.at("power_a1_c_plus_one");
                if (!v.is_boolean()) {
                    throw ConfigError("'power_a1_c_plus_one' must be a boolean");
                }
                cfg.fit.power_a1_c_plus_one = v.get<bool>();
            }
        }
        cfg.output_dir = get_string(j, "output_dir", cfg.output_dir);
        cfg.validate();
        return cfg;
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_run_config_text(buf.str());
}

std::string canonical_config_json(const RunConfig& config) {
    json j;
    j["env"] = {{"spreading_k", config.env.spreading_k},
                {"shipping_s", config.env.shipping_s},
                {"wind_w", config.env.wind_w}};
    const SolverSettings& st = config.solver;
    j["solver"] = {
        {"f_min_khz", st.f_min_khz},
        {"f_max_khz", st.f_max_khz},
        {"grid_points", st.grid_points},
        {"capacity_rel_tol", st.capacity_rel_tol},
        {"capacity_abs_tol_kbps", st.capacity_abs_tol_kbps},
        {"band_edge_rel_tol", st.band_edge_rel_tol},
        {"k_max_factor", st.k_max_factor},
        {"root_mode", st.root_mode == SolverSettings::RootMode::bisection
                          ? "bisection"
                          : "epsilon_increment"},
        {"epsilon_db", st.epsilon_db},
        {"quadrature", st.quadrature == SolverSettings::Quadrature::trapezoid
                           ? "trapezoid"
                           : "simpson"},
        {"max_iterations", st.max_iterations}};
    json sweep;
    sweep["case"] = config.sweep.case_preset;
    if (config.sweep.has_axes) {
        sweep["l_km"] = axis_json(config.sweep.l_km);
        sweep["c_kbps"] = axis_json(config.sweep.c_kbps);
    }
    j["sweep"] = sweep;
    j["fit"] = {{"power_a1_c_plus_one", config.fit.power_a1_c_plus_one}};
    return j.dump();
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash(const RunConfig& config) {
    const std::string canon = canonical_config_json(config);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    return buf;
}

}  // namespace uwac
