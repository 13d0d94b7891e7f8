#pragma once

#include "derham/harness.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace derham {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json optional_dims(const std::vector<std::optional<std::size_t>> &d) {
    Json a = Json::array();
    for (const auto &v : d)
        a.push_back(v ? Json(*v) : Json(nullptr));
    return a;
}

} // namespace detail

/// Stable key order, no floating point; wall_time_ms only when supplied.
inline Json to_json(const VerificationReport &r, std::optional<long long> wall_time_ms = std::nullopt) {
    Json j;
    j["theorem"] = r.theorem;

    Json input;
    input["n"] = r.n;
    input["variables"] = r.variables;
    input["ideal"] = r.ideal;
    input["cech_generators"] = r.cech_generators;
    Json opts;
    opts["caps"] = r.options.caps;
    opts["degree_span"] = r.options.degree_span;
    opts["stab_window"] = r.options.window;
    opts["gap"] = r.options.gap;
    opts["strategy"] = to_string(r.options.strategy);
    input["options"] = opts;
    j["input"] = input;

    Json expected;
    Json facts = Json::object();
    for (const auto &[k, v] : r.facts)
        facts[k] = v;
    expected["facts"] = facts;
    for (const auto &e : r.expected) {
        Json x;
        x["provenance"] = e.provenance;
        x["cohomological"] = detail::optional_dims(e.cohomological);
        std::vector<std::optional<std::size_t>> h(e.cohomological.rbegin(), e.cohomological.rend());
        x["homological"] = detail::optional_dims(h);
        expected[e.label] = x;
    }
    j["expected"] = expected;

    Json computed = Json::object();
    Json windows = Json::array();
    for (const auto &c : r.computed) {
        Json x;
        x["cohomological"] = c.result.cohomological_dims;
        x["homological"] = c.result.homological_dims;
        x["total_complex"] = c.result.tot_dims;
        x["stabilized"] = c.result.stabilized;
        x["concentrated"] = c.result.concentrated;
        x["support_dim"] = c.support_dim;
        x["vanishing_bound"] = c.vanishing_bound;
        x["strategy"] = to_string(c.result.strategy);
        x["gradings"] = c.result.gradings;
        computed[c.label] = x;
        for (const auto &w : c.result.window_trace) {
            Json y;
            y["entry"] = c.label;
            y["k_cap"] = w.k_cap;
            y["outer_k_cap"] = w.outer_k_cap;
            y["degree_span"] = w.degree_span;
            y["inner_size"] = w.inner_size;
            y["outer_size"] = w.outer_size;
            y["dims"] = w.dims;
            y["widened_dims"] = w.widened_dims;
            y["raw_dims"] = w.raw_dims;
            windows.push_back(y);
        }
    }
    j["computed"] = computed;
    j["windows"] = windows;
    j["seed"] = r.seed;
    j["verdict"] = to_string(r.verdict);
    j["failures"] = r.failures;
    if (wall_time_ms)
        j["wall_time_ms"] = *wall_time_ms;
    return j;
}

} // namespace derham
