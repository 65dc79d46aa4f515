// config.hpp - experiment configuration files and the named figure presets
//
// A configuration is a flat JSON object. Every key is optional; missing keys
// take the defaults of the squeezed-field study (|alpha|^2 = 5,
// r = asinh(1), xi = 0, theta = phi = 0, resonance, lambda1 = lambda2 = 1).
//
//   { "chi": 0.2, "t_max_scaled": 50, "n_time": 2001 }
//
// Detunings are given either directly (delta1, delta2) or through the full
// motional block (omega1, omega2, omega3, Omega, k, P0, M), never both.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kerrlambda/simulation_driver.hpp"

namespace kerrlambda {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

namespace detail {

inline const std::vector<std::string>& detuning_keys() {
    static const std::vector<std::string> keys{"omega1", "omega2", "omega3", "Omega", "k", "P0", "M"};
    return keys;
}

inline double get_number(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

inline std::size_t get_count(const nlohmann::json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(key, "expected a nonnegative integer");
    return v.get<std::size_t>();
}

}  // namespace detail

/// Builds and validates a config from a parsed JSON object.
inline ExperimentConfig parse_config(const nlohmann::json& j, const std::string& name = "experiment") {
    if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");

    static const std::set<std::string> known{
        "name", "chi", "lambda1", "lambda2", "delta1", "delta2", "theta", "phi", "alpha_sq", "r", "xi",
        "t_max_scaled", "n_time", "epsilon_tail", "n_cap", "oracle_check", "oracle_dt", "threads",
        "omega1", "omega2", "omega3", "Omega", "k", "P0", "M"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ConfigError(key, "unknown key");
    }

    ExperimentConfig cfg;
    cfg.name = j.contains("name") ? j.at("name").get<std::string>() : name;
    auto number = [&](const char* key, double& target) {
        if (j.contains(key)) target = detail::get_number(j, key);
    };
    number("chi", cfg.model.chi);
    number("lambda1", cfg.model.lambda1);
    number("lambda2", cfg.model.lambda2);
    number("delta1", cfg.model.delta1);
    number("delta2", cfg.model.delta2);
    number("theta", cfg.model.theta);
    number("phi", cfg.model.phi);
    number("r", cfg.field.r);
    number("xi", cfg.field.xi);
    number("epsilon_tail", cfg.field.epsilon_tail);
    number("t_max_scaled", cfg.t_max_scaled);
    number("oracle_dt", cfg.oracle_dt);
    if (j.contains("alpha_sq")) {
        const double a2 = detail::get_number(j, "alpha_sq");
        if (!(a2 >= 0.0)) throw ConfigError("alpha_sq", "must be >= 0");
        cfg.field.alpha_mag = std::sqrt(a2);
    }
    if (j.contains("n_time")) cfg.n_time = detail::get_count(j, "n_time");
    if (j.contains("n_cap")) cfg.field.n_cap = detail::get_count(j, "n_cap");
    if (j.contains("threads")) cfg.threads = static_cast<unsigned>(detail::get_count(j, "threads"));
    if (j.contains("oracle_check")) {
        if (!j.at("oracle_check").is_boolean()) throw ConfigError("oracle_check", "expected true or false");
        cfg.oracle_check = j.at("oracle_check").get<bool>();
    }

    std::vector<std::string> present, missing;
    for (const auto& key : detail::detuning_keys()) (j.contains(key) ? present : missing).push_back(key);
    if (!present.empty()) {
        if (j.contains("delta1") || j.contains("delta2")) {
            throw ConfigError(j.contains("delta1") ? "delta1" : "delta2",
                              "detunings given both directly and through the " + present.front() + " block");
        }
        if (!missing.empty()) throw ConfigError(missing.front(), "detuning block is incomplete");
        DetuningInputs d;
        d.omega1 = detail::get_number(j, "omega1");
        d.omega2 = detail::get_number(j, "omega2");
        d.omega3 = detail::get_number(j, "omega3");
        d.Omega = detail::get_number(j, "Omega");
        d.k = detail::get_number(j, "k");
        d.P0 = detail::get_number(j, "P0");
        d.M = detail::get_number(j, "M");
        cfg.detuning = d;
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ConfigError(colon == std::string::npos ? "" : msg.substr(0, colon),
                          colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
    return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text, const std::string& name = "experiment") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("unparseable configuration: ") + e.what());
    }
    return parse_config(j, name);
}

/// Reads a config file; its stem becomes the default experiment name.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.stem().string());
}

/// Canonical JSON form of a config; parse_config accepts it back.
inline nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["name"] = cfg.name;
    j["chi"] = cfg.model.chi;
    j["lambda1"] = cfg.model.lambda1;
    j["lambda2"] = cfg.model.lambda2;
    if (cfg.detuning) {
        j["omega1"] = cfg.detuning->omega1;
        j["omega2"] = cfg.detuning->omega2;
        j["omega3"] = cfg.detuning->omega3;
        j["Omega"] = cfg.detuning->Omega;
        j["k"] = cfg.detuning->k;
        j["P0"] = cfg.detuning->P0;
        j["M"] = cfg.detuning->M;
    } else {
        j["delta1"] = cfg.model.delta1;
        j["delta2"] = cfg.model.delta2;
    }
    j["theta"] = cfg.model.theta;
    j["phi"] = cfg.model.phi;
    j["alpha_sq"] = cfg.field.alpha_mag * cfg.field.alpha_mag;
    j["r"] = cfg.field.r;
    j["xi"] = cfg.field.xi;
    j["t_max_scaled"] = cfg.t_max_scaled;
    j["n_time"] = cfg.n_time;
    j["epsilon_tail"] = cfg.field.epsilon_tail;
    j["n_cap"] = cfg.field.n_cap;
    j["oracle_check"] = cfg.oracle_check;
    j["oracle_dt"] = cfg.oracle_dt;
    return j;
}

// Kerr parameters of the three panels fig2a, fig2b, fig2c.
inline const std::map<std::string, double>& figure_presets() {
    static const std::map<std::string, double> presets{{"fig2a", 0.001}, {"fig2b", 0.2}, {"fig2c", 0.6}};
    return presets;
}

inline ExperimentConfig preset(const std::string& name) {
    const auto& presets = figure_presets();
    const auto it = presets.find(name);
    if (it == presets.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.model.chi = it->second;
    return cfg;
}

struct SweepPreset {
    ExperimentConfig base;
    std::vector<double> chis;
};

/// The Kerr sweep behind both figures: the three panels on one set of axes.
inline SweepPreset sweep_preset(const std::string& name) {
    if (name != "fig2" && name != "fig3") throw ConfigError("preset", "unknown sweep preset '" + name + "'");
    SweepPreset s;
    s.base.name = name;
    for (const auto& [panel, chi] : figure_presets()) s.chis.push_back(chi);
    return s;
}

}  // namespace kerrlambda
