#pragma once

#include "derham/derham.hpp"
#include "derham/error.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>

namespace derham {

struct Config {
    int k_cap = 12;
    int degree_span = 2;
    std::size_t stab_window = 2;
    std::uint64_t seed = 1;
    std::size_t retries = 32;
    std::string strategy = "graded";
    std::string json;
    bool quiet = false;

    StabilizationOptions stabilization() const {
        StabilizationOptions o;
        o.caps = cap_schedule(std::min(4, k_cap), k_cap);
        o.degree_span = degree_span;
        o.window = stab_window;
        if (strategy == "graded")
            o.strategy = Strategy::Graded;
        else if (strategy == "filtered")
            o.strategy = Strategy::Filtered;
        else
            throw Error(ErrorCode::InvalidArgument, "strategy must be graded or filtered");
        return o;
    }
};

using Settings = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string &s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline long long to_integer(const std::string &key, const std::string &v) {
    try {
        std::size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception &) {
        throw Error(ErrorCode::InvalidArgument, "setting " + key + " expects an integer, got '" + v + "'");
    }
}

inline bool to_bool(const std::string &key, const std::string &v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw Error(ErrorCode::InvalidArgument, "setting " + key + " expects a boolean, got '" + v + "'");
}

} // namespace detail

inline const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys{"k_cap", "degree_span", "stab_window", "seed",
                                               "retries", "strategy", "json", "quiet"};
    return keys;
}

/// `key = value` lines; '#' starts a comment.
inline Settings read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::InvalidArgument, "cannot read config file " + path);
    Settings s;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(number) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
            throw Error(ErrorCode::InvalidArgument, path + ":" + std::to_string(number) + ": unknown key " + key);
        s[key] = detail::trim(line.substr(eq + 1));
    }
    return s;
}

/// DERHAM_<KEY> variables, e.g. DERHAM_K_CAP.
inline Settings read_environment() {
    Settings s;
    for (const auto &key : config_keys()) {
        std::string name = "DERHAM_";
        for (char c : key)
            name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char *v = std::getenv(name.c_str()))
            s[key] = v;
    }
    return s;
}

inline void apply_settings(Config &c, const Settings &s) {
    for (const auto &[key, v] : s) {
        if (key == "k_cap")
            c.k_cap = static_cast<int>(detail::to_integer(key, v));
        else if (key == "degree_span")
            c.degree_span = static_cast<int>(detail::to_integer(key, v));
        else if (key == "stab_window")
            c.stab_window = static_cast<std::size_t>(detail::to_integer(key, v));
        else if (key == "seed")
            c.seed = static_cast<std::uint64_t>(detail::to_integer(key, v));
        else if (key == "retries")
            c.retries = static_cast<std::size_t>(detail::to_integer(key, v));
        else if (key == "strategy")
            c.strategy = v;
        else if (key == "json")
            c.json = v;
        else if (key == "quiet")
            c.quiet = detail::to_bool(key, v);
        else
            throw Error(ErrorCode::InvalidArgument, "unknown setting " + key);
    }
    if (c.k_cap < 1 || c.degree_span < 0 || c.stab_window < 1)
        throw Error(ErrorCode::InvalidArgument, "k_cap must be >= 1, degree_span >= 0, stab_window >= 1");
}

/// Defaults < config file < environment < flags.
inline Config resolve_config(const std::optional<std::string> &file, const Settings &env, const Settings &flags) {
    Config c;
    if (file)
        apply_settings(c, read_config_file(*file));
    apply_settings(c, env);
    apply_settings(c, flags);
    return c;
}

} // namespace derham
