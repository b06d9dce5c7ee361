#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "latcs/errors.hpp"
#include "latcs/point.hpp"
#include "latcs/vortex.hpp"

namespace latcs {

/// One experiment as described by a JSON config file. Optional fields keep
/// their defaults when absent; kind-specific requirements are enforced by
/// validate(). Masses are real so the fractional diagnostic hook is reachable
/// from config files; physical integer data is represented exactly.
struct ExperimentConfig {
    std::string kind; // solve | sweep_lambda | small_lambda | green_table | decay | uniqueness
    int dim = 2;
    std::vector<std::pair<Point, double>> u_vortices;
    std::vector<std::pair<Point, double>> v_vortices;
    std::optional<double> lambda;               // solve, decay, uniqueness
    std::optional<std::vector<double>> lambdas; // sweep_lambda, small_lambda
    std::optional<std::vector<int>> radii;
    int window_radius = 5;
    int table_radius = 3; // green_table
    int axis = 0;         // decay
    double ext_tol = 1e-8;
    double stop_tol = 1e-10;
    double agree_tol = 1e-7;
    double green_tol = 0.0; // 0 keeps the base quadrature / sampling budget
    std::int64_t max_outer = 100000;
    int workers = 1;
    std::string out_dir;
    std::uint64_t seed = 0x6c617463735f67ULL;
};

namespace detail {

inline const std::vector<std::string>& config_kinds() {
    static const std::vector<std::string> kinds{"solve",       "sweep_lambda", "small_lambda",
                                                "green_table", "decay",        "uniqueness"};
    return kinds;
}

inline void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                                const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("unknown config field \"" + scope + it.key() + "\"",
                              {scope + it.key()});
    }
}

template <typename T>
inline T get_field(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config field \"" + key + "\" is missing or has the wrong type", {key});
    }
}

template <typename T>
inline void read_optional(const nlohmann::json& j, const std::string& key, T& out) {
    if (j.contains(key)) out = get_field<T>(j, key);
}

inline std::vector<std::pair<Point, double>> read_vortex_list(const nlohmann::json& j,
                                                              const std::string& key, int dim) {
    std::vector<std::pair<Point, double>> out;
    if (!j.contains(key)) return out;
    const nlohmann::json& list = j.at(key);
    if (!list.is_array()) throw ConfigError("config field \"" + key + "\" must be an array", {key});
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string scope = key + "[" + std::to_string(i) + "].";
        const nlohmann::json& entry = list[i];
        if (!entry.is_object())
            throw ConfigError("vortex entries must be objects with site and mass",
                              {key + "[" + std::to_string(i) + "]"});
        reject_unknown_keys(entry, {"site", "mass"}, scope);
        std::vector<int> site = get_field<std::vector<int>>(entry, "site");
        if (static_cast<int>(site.size()) != dim)
            throw ConfigError("vortex site length does not match the dimension", {scope + "site"});
        const double mass = get_field<double>(entry, "mass");
        out.emplace_back(Point(std::span<const int>(site)), mass);
    }
    return out;
}

} // namespace detail

/// Kind-level checks: required fields present, tolerances positive, schedules
/// and geometry sane. Ordering details that the solver modules themselves
/// certify (for instance schedule direction) are still validated here so the
/// failure is a config diagnostic, not a run failure.
inline void validate_config(const ExperimentConfig& c) {
    std::vector<std::string> bad;
    const auto& kinds = detail::config_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
        throw ConfigError("unknown experiment kind \"" + c.kind + "\"", {"kind"});
    if (c.dim < 2) throw ConfigError("dimension must be at least 2", {"dim"});
    if (c.kind == "green_table" && c.dim < 3)
        throw ConfigError("the Green table needs dimension at least 3", {"dim"});

    const bool wants_single = c.kind == "solve" || c.kind == "decay" || c.kind == "uniqueness";
    const bool wants_schedule = c.kind == "sweep_lambda" || c.kind == "small_lambda";
    if (wants_single) {
        if (!c.lambda) throw ConfigError("experiment needs a coupling value", {"lambda"});
        if (!(*c.lambda > 0.0)) throw ConfigError("coupling must be positive", {"lambda"});
    }
    if (wants_schedule) {
        if (!c.lambdas || c.lambdas->empty())
            throw ConfigError("experiment needs a coupling schedule", {"lambdas"});
        for (double l : *c.lambdas)
            if (!(l > 0.0)) throw ConfigError("coupling schedule must be positive", {"lambdas"});
        for (std::size_t i = 0; i + 1 < c.lambdas->size(); ++i) {
            if (c.kind == "sweep_lambda" && !((*c.lambdas)[i] < (*c.lambdas)[i + 1]))
                throw ConfigError("coupling schedule must be strictly increasing", {"lambdas"});
            if (c.kind == "small_lambda" && !((*c.lambdas)[i] > (*c.lambdas)[i + 1]))
                throw ConfigError("coupling schedule must be strictly decreasing", {"lambdas"});
        }
    }

    if (c.kind == "solve" || c.kind == "decay") {
        if (!c.radii || c.radii->empty())
            throw ConfigError("experiment needs an exhaustion radius ladder", {"radii"});
    }
    if (c.radii) {
        for (int r : *c.radii)
            if (r < 1) throw ConfigError("box radii must be positive", {"radii"});
        if (!std::is_sorted(c.radii->begin(), c.radii->end()))
            throw ConfigError("box radii must be nondecreasing", {"radii"});
    }
    if (c.kind == "small_lambda" && c.radii && c.lambdas &&
        c.radii->size() != c.lambdas->size())
        throw ConfigError("one box radius per coupling required", {"radii", "lambdas"});

    if (c.window_radius < 1) throw ConfigError("window radius must be positive", {"window_radius"});
    if (c.kind == "green_table" && c.table_radius < 1)
        throw ConfigError("table radius must be positive", {"table_radius"});
    if (c.axis < 0 || c.axis >= c.dim) throw ConfigError("axis out of range", {"axis"});

    if (!(c.ext_tol > 0.0)) bad.push_back("ext_tol");
    if (!(c.stop_tol > 0.0)) bad.push_back("stop_tol");
    if (!(c.agree_tol > 0.0)) bad.push_back("agree_tol");
    if (c.green_tol < 0.0) bad.push_back("green_tol");
    if (!bad.empty()) {
        std::string msg = "tolerances must be positive:";
        for (const std::string& f : bad) msg += " " + f;
        throw ConfigError(msg, bad);
    }
    if (c.max_outer < 1) throw ConfigError("iteration budget must be positive", {"max_outer"});
    if (c.workers < 1) throw ConfigError("worker count must be positive", {"workers"});

    for (const auto& [site, mass] : c.u_vortices)
        if (!(mass > 0.0)) throw ConfigError("vortex masses must be positive", {"u_vortices"});
    for (const auto& [site, mass] : c.v_vortices)
        if (!(mass > 0.0)) throw ConfigError("vortex masses must be positive", {"v_vortices"});
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object", {});
    detail::reject_unknown_keys(
        j,
        {"kind", "dim", "u_vortices", "v_vortices", "lambda", "lambdas", "radii", "window_radius",
         "table_radius", "axis", "ext_tol", "stop_tol", "agree_tol", "green_tol", "max_outer",
         "workers", "out_dir", "seed"},
        "");

    ExperimentConfig c;
    c.kind = detail::get_field<std::string>(j, "kind");
    c.dim = detail::get_field<int>(j, "dim");
    if (c.dim < 2) throw ConfigError("dimension must be at least 2", {"dim"});
    c.u_vortices = detail::read_vortex_list(j, "u_vortices", c.dim);
    c.v_vortices = detail::read_vortex_list(j, "v_vortices", c.dim);
    if (j.contains("lambda")) c.lambda = detail::get_field<double>(j, "lambda");
    if (j.contains("lambdas")) c.lambdas = detail::get_field<std::vector<double>>(j, "lambdas");
    if (j.contains("radii")) c.radii = detail::get_field<std::vector<int>>(j, "radii");
    detail::read_optional(j, "window_radius", c.window_radius);
    detail::read_optional(j, "table_radius", c.table_radius);
    detail::read_optional(j, "axis", c.axis);
    detail::read_optional(j, "ext_tol", c.ext_tol);
    detail::read_optional(j, "stop_tol", c.stop_tol);
    detail::read_optional(j, "agree_tol", c.agree_tol);
    detail::read_optional(j, "green_tol", c.green_tol);
    detail::read_optional(j, "max_outer", c.max_outer);
    detail::read_optional(j, "workers", c.workers);
    detail::read_optional(j, "out_dir", c.out_dir);
    detail::read_optional(j, "seed", c.seed);
    validate_config(c);
    return c;
}

/// Parses config text, mapping JSON syntax errors to ConfigError with the
/// line computed from the reported byte offset.
inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t stop = std::min(text.size(), static_cast<std::size_t>(e.byte));
        for (std::size_t i = 0; i < stop; ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what(),
                          {});
    }
    return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path, {});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Full echo of a config, defaults included, so the summary round-trips to
/// an equivalent experiment.
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["kind"] = c.kind;
    j["dim"] = c.dim;
    auto vortex_list = [](const std::vector<std::pair<Point, double>>& list) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [site, mass] : list) {
            nlohmann::json entry;
            std::vector<int> coords(site.begin(), site.end());
            entry["site"] = coords;
            entry["mass"] = mass;
            arr.push_back(entry);
        }
        return arr;
    };
    j["u_vortices"] = vortex_list(c.u_vortices);
    j["v_vortices"] = vortex_list(c.v_vortices);
    if (c.lambda) j["lambda"] = *c.lambda;
    if (c.lambdas) j["lambdas"] = *c.lambdas;
    if (c.radii) j["radii"] = *c.radii;
    j["window_radius"] = c.window_radius;
    j["table_radius"] = c.table_radius;
    j["axis"] = c.axis;
    j["ext_tol"] = c.ext_tol;
    j["stop_tol"] = c.stop_tol;
    j["agree_tol"] = c.agree_tol;
    j["green_tol"] = c.green_tol;
    j["max_outer"] = c.max_outer;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir;
    j["seed"] = c.seed;
    return j;
}

inline bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

inline VortexConfig make_vortex_config(const ExperimentConfig& c) {
    return VortexConfig::fractional(c.dim, c.u_vortices, c.v_vortices);
}

/// The `sweep` subcommand fronts both coupling-schedule kinds; `green` fronts
/// the table kind; every other subcommand matches its kind by name.
inline bool kind_matches_subcommand(const std::string& subcommand, const std::string& kind) {
    if (subcommand == "sweep") return kind == "sweep_lambda" || kind == "small_lambda";
    if (subcommand == "green") return kind == "green_table";
    return subcommand == kind;
}

} // namespace latcs
