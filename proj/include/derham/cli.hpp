#pragma once

#include "derham/config.hpp"
#include "derham/harness.hpp"
#include "derham/report.hpp"
#include "derham/selftest.hpp"
#include "derham/syntax.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace derham::cli {

enum ExitCode { Pass = 0, Fail = 1, Inconclusive = 2, Usage = 3 };

inline int exit_code(Verdict v) {
    switch (v) {
    case Verdict::Pass: return Pass;
    case Verdict::Fail: return Fail;
    case Verdict::Inconclusive: return Inconclusive;
    }
    return Fail;
}

namespace detail {

struct Flags {
    std::optional<int> k_cap, degree_span;
    std::optional<std::size_t> stab_window, retries;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> json, strategy, config;
    bool quiet = false;
    bool timing = false;

    Settings settings() const {
        Settings s;
        if (k_cap)
            s["k_cap"] = std::to_string(*k_cap);
        if (degree_span)
            s["degree_span"] = std::to_string(*degree_span);
        if (stab_window)
            s["stab_window"] = std::to_string(*stab_window);
        if (retries)
            s["retries"] = std::to_string(*retries);
        if (seed)
            s["seed"] = std::to_string(*seed);
        if (json)
            s["json"] = *json;
        if (strategy)
            s["strategy"] = *strategy;
        if (quiet)
            s["quiet"] = "true";
        return s;
    }
};

struct IdealArgs {
    std::string vars;
    std::vector<std::string> ideal;
};

inline std::vector<Polynomial> parse_all(const std::vector<std::string> &src, const std::vector<std::string> &vars) {
    std::vector<Polynomial> out;
    for (const auto &s : src) {
        try {
            out.push_back(parse_polynomial(s, vars));
        } catch (const ParseError &e) {
            std::string what = e.what();
            what.erase(0, std::string(to_string(e.code())).size() + 2);
            throw Error(e.code(), "in '" + s + "': " + what);
        }
    }
    return out;
}

inline void write_json(const Json &j, const std::string &path, std::ostream &out) {
    std::string text = j.dump(2) + "\n";
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    f << text;
}

inline void print_report(const VerificationReport &r, std::ostream &out) {
    out << r.theorem << " over (";
    for (std::size_t i = 0; i < r.variables.size(); ++i)
        out << (i ? "," : "") << r.variables[i];
    out << ")";
    if (!r.ideal.empty()) {
        out << ", ideal (";
        for (std::size_t i = 0; i < r.ideal.size(); ++i)
            out << (i ? ", " : "") << r.ideal[i];
        out << ")";
    }
    out << "\n";
    for (const auto &[k, v] : r.facts)
        out << "  " << k << ": " << v << "\n";
    for (const auto &e : r.expected)
        out << "  expected " << e.label << ": H^* = " << derham::detail::dims_text(e.cohomological) << "\n";
    for (const auto &c : r.computed) {
        out << "  computed " << c.label << ": H^* = " << derham::detail::dims_text(c.result.cohomological_dims)
            << ", homological " << derham::detail::dims_text(c.result.homological_dims);
        if (!c.result.stabilized)
            out << " (not stabilized)";
        out << "\n";
    }
    for (const auto &f : r.failures)
        out << "  failure: " << f << "\n";
    out << "verdict: " << to_string(r.verdict) << "\n";
}

inline Json selftest_json(const SelfTestReport &r, std::uint64_t seed) {
    Json j;
    j["theorem"] = "selftest";
    Json checks = Json::object();
    for (const auto &c : r.checks) {
        Json x;
        x["samples"] = c.samples;
        x["failures"] = c.failures;
        x["passed"] = c.passed();
        checks[c.name] = x;
    }
    j["checks"] = checks;
    j["changes_per_class"] = r.changes_per_class;
    j["unstabilized"] = r.unstabilized;
    j["seed"] = seed;
    j["verdict"] = to_string(r.verdict());
    return j;
}

} // namespace detail

/// Parses argv, runs one subcommand and returns the exit code.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    CLI::App app{"De Rham cohomology of local cohomology modules in exact arithmetic", "derham_cli"};
    app.require_subcommand(1);
    app.fallthrough();
    detail::Flags flags;
    app.add_option("--k-cap", flags.k_cap, "largest truncation cap (schedule 4, 6, ..., k-cap)");
    app.add_option("--degree-span", flags.degree_span, "degree span of the windows");
    app.add_option("--stab-window", flags.stab_window, "consecutive caps that must agree");
    app.add_option("--seed", flags.seed, "seed for random changes of coordinates");
    app.add_option("--retries", flags.retries, "attempts at a generic change of coordinates");
    app.add_option("--strategy", flags.strategy, "graded or filtered");
    app.add_option("--json", flags.json, "write the JSON report to PATH ('-' for standard output)");
    app.add_option("--config", flags.config, "key = value configuration file");
    app.add_flag("--quiet", flags.quiet, "no human-readable summary");
    app.add_flag("--timing", flags.timing, "include wall_time_ms in the JSON report");

    auto *verify = app.add_subcommand("verify", "check a theorem instance against computed dimensions");
    verify->require_subcommand(1);
    detail::IdealArgs t1, t2;
    auto *theorem1 = verify->add_subcommand("theorem1", "zero-dimensional ideal: H^n counts the points");
    theorem1->add_option("--vars", t1.vars, "comma-separated variable names")->required();
    theorem1->add_option("--ideal", t1.ideal, "generator (repeatable)")->required();
    auto *theorem2 = verify->add_subcommand("theorem2", "homogeneous ideal of height n-1");
    theorem2->add_option("--vars", t2.vars, "comma-separated variable names")->required();
    theorem2->add_option("--ideal", t2.ideal, "generator (repeatable)")->required();
    std::size_t blocks_n = 0;
    std::string blocks_vars;
    std::vector<std::string> blocks_f;
    auto *blocks = verify->add_subcommand("blocks", "closed forms for E, R, H^{n-1}_P(R), R_f and H^1_(f)(R)");
    blocks->add_option("--n", blocks_n, "number of variables")->required()->check(CLI::Range(1, 8));
    blocks->add_option("--vars", blocks_vars, "variable names for --f");
    blocks->add_option("--f", blocks_f, "squarefree polynomial (repeatable)");

    std::string module_name;
    std::optional<std::string> compute_f;
    std::optional<std::size_t> compute_c, compute_n;
    detail::IdealArgs cc;
    auto *compute = app.add_subcommand("compute", "De Rham dimensions of one module");
    compute->add_option("--module", module_name, "R, E, Rf, HP or cech")
        ->required()
        ->check(CLI::IsMember({"R", "E", "Rf", "HP", "cech"}));
    compute->add_option("--f", compute_f, "localizing polynomial for Rf");
    compute->add_option("--c", compute_c, "local cohomology degree for cech");
    compute->add_option("--n", compute_n, "number of variables")->check(CLI::Range(1, 8));
    compute->add_option("--vars", cc.vars, "comma-separated variable names");
    compute->add_option("--ideal", cc.ideal, "Cech generator (repeatable)");

    auto *selftest = app.add_subcommand("selftest", "run the property corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return Pass;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return Pass;
    } catch (const CLI::ParseError &e) {
        err << "derham_cli: " << e.what() << "\n";
        return Usage;
    }

    auto started = std::chrono::steady_clock::now();
    auto elapsed = [&]() -> std::optional<long long> {
        if (!flags.timing)
            return std::nullopt;
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
            .count();
    };

    try {
        Config cfg = resolve_config(flags.config, read_environment(), flags.settings());
        HarnessOptions ho;
        ho.stabilization = cfg.stabilization();
        ho.seed = cfg.seed;
        ho.retries = cfg.retries;

        auto emit = [&](const VerificationReport &r) {
            if (!cfg.quiet)
                detail::print_report(r, out);
            if (!cfg.json.empty())
                detail::write_json(to_json(r, elapsed()), cfg.json, out);
            return exit_code(r.verdict);
        };

        if (theorem1->parsed() || theorem2->parsed()) {
            const auto &a = theorem1->parsed() ? t1 : t2;
            ho.variables = parse_variables(a.vars);
            Ideal ideal(ho.variables.size(), detail::parse_all(a.ideal, ho.variables));
            return emit(theorem1->parsed() ? verify_theorem1(ideal, ho) : verify_theorem2(ideal, ho));
        }
        if (blocks->parsed()) {
            ho.variables = blocks_vars.empty() ? default_variables(blocks_n) : parse_variables(blocks_vars);
            if (ho.variables.size() != blocks_n)
                throw Error(ErrorCode::InvalidArgument, "--vars must list exactly --n names");
            std::optional<std::vector<Polynomial>> fs;
            if (!blocks_f.empty())
                fs = detail::parse_all(blocks_f, ho.variables);
            return emit(verify_building_blocks(blocks_n, ho, fs));
        }
        if (compute->parsed()) {
            std::vector<std::string> vars;
            if (!cc.vars.empty())
                vars = parse_variables(cc.vars);
            else if (compute_n)
                vars = default_variables(*compute_n);
            else
                throw Error(ErrorCode::InvalidArgument, "compute needs --n or --vars");
            if (compute_n && *compute_n != vars.size())
                throw Error(ErrorCode::InvalidArgument, "--vars must list exactly --n names");
            const std::size_t n = vars.size();
            VerificationReport r;
            r.theorem = "compute";
            r.n = n;
            r.variables = vars;
            r.seed = cfg.seed;
            r.options = ho.stabilization;
            auto partials = standard_partials(n);
            std::size_t c = 0, support = n;
            std::optional<Layout> layout;
            if (module_name == "E") {
                layout = Layout::single(std::make_shared<InjectiveHullFamily>(n));
                support = 0;
            } else if (module_name == "R") {
                layout = Layout::single(polynomial_ring(n));
            } else if (module_name == "HP") {
                if (n < 2)
                    throw Error(ErrorCode::InvalidArgument, "HP needs n >= 2");
                layout = Layout::single(std::make_shared<EPolyFamily>(n));
                support = 1;
            } else if (module_name == "Rf") {
                if (!compute_f)
                    throw Error(ErrorCode::InvalidArgument, "Rf needs --f");
                auto f = detail::parse_all({*compute_f}, vars).front();
                r.ideal.push_back(format_polynomial(f, vars));
                layout = Layout::single(std::make_shared<LocalizationFamily>(f));
            } else {
                if (cc.ideal.empty())
                    throw Error(ErrorCode::InvalidArgument, "cech needs at least one --ideal");
                auto gens = detail::parse_all(cc.ideal, vars);
                r.ideal = derham::detail::texts(gens, vars);
                r.cech_generators = r.ideal;
                c = compute_c ? *compute_c : gens.size();
                if (c > gens.size())
                    throw Error(ErrorCode::InvalidArgument, "--c exceeds the number of generators");
                layout = Layout::cech(std::make_shared<CechSpec>(n, gens));
                auto gb = groebner(Ideal(n, gens), MonomialOrder::degrevlex(n));
                support = gb.is_unit() ? 0 : krull_dim(gb);
            }
            r.computed.push_back(
                derham::detail::entry(module_name, derham_dims(*layout, partials, c, ho.stabilization), support));
            derham::detail::finish(r);
            return emit(r);
        }
        if (selftest->parsed()) {
            SelfTestOptions so;
            so.seed = cfg.seed;
            so.stabilization = ho.stabilization;
            auto r = run_selftest(so);
            if (!cfg.quiet) {
                for (const auto &c : r.checks) {
                    out << (c.passed() ? "PASS " : "FAIL ") << c.name << " (" << c.samples << " samples)\n";
                    for (const auto &f : c.failures)
                        out << "  " << f << "\n";
                }
                for (const auto &u : r.unstabilized)
                    out << "  not stabilized: " << u << "\n";
                out << "verdict: " << to_string(r.verdict()) << "\n";
            }
            if (!cfg.json.empty()) {
                auto j = detail::selftest_json(r, cfg.seed);
                if (auto ms = elapsed())
                    j["wall_time_ms"] = *ms;
                detail::write_json(j, cfg.json, out);
            }
            return exit_code(r.verdict());
        }
    } catch (const Error &e) {
        err << "derham_cli: " << e.what() << "\n";
        if (e.code() == ErrorCode::NoStabilization)
            return Inconclusive;
        return e.code() == ErrorCode::NoGoodChangeFound ? Inconclusive : Usage;
    }
    return Usage;
}

} // namespace derham::cli
