#pragma once

#include "derham/derham.hpp"
#include "derham/dmodrep.hpp"
#include "derham/error.hpp"
#include "derham/ideal.hpp"
#include "derham/syntax.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace derham {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char *to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive-no-stabilization";
    }
    return "?";
}

struct HarnessOptions {
    StabilizationOptions stabilization;
    std::uint64_t seed = 1;
    std::size_t retries = 32;
    std::vector<std::string> variables; // empty: x, y, z, ...
};

struct ExpectedEntry {
    std::string label;
    std::string provenance;
    std::vector<std::optional<std::size_t>> cohomological;
};

struct ComputedEntry {
    std::string label;
    DeRhamResult result;
    std::size_t support_dim = 0;
    bool vanishing_bound = true;
};

struct VerificationReport {
    std::string theorem;
    std::size_t n = 0;
    std::vector<std::string> variables;
    std::vector<std::string> ideal;
    std::vector<std::string> cech_generators;
    std::vector<std::pair<std::string, std::string>> facts;
    std::vector<ExpectedEntry> expected;
    std::vector<ComputedEntry> computed;
    std::vector<std::string> failures;
    std::uint64_t seed = 0;
    StabilizationOptions options;
    Verdict verdict = Verdict::Fail;

    const ComputedEntry *find(const std::string &label) const {
        for (const auto &c : computed)
            if (c.label == label)
                return &c;
        return nullptr;
    }
};

/// True iff H^i = 0 for every i < n - support_dim.
inline bool check_theorem3_bound(const DeRhamResult &r, std::size_t support_dim) {
    for (std::size_t i = 0; i + support_dim < r.n && i < r.cohomological_dims.size(); ++i)
        if (r.cohomological_dims[i] != 0)
            return false;
    return true;
}

namespace detail {

inline std::string dims_text(const std::vector<std::size_t> &d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i)
        s += (i ? "," : "") + std::to_string(d[i]);
    return s + "]";
}

inline std::string dims_text(const std::vector<std::optional<std::size_t>> &d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i)
        s += (i ? "," : "") + (d[i] ? std::to_string(*d[i]) : std::string("*"));
    return s + "]";
}

inline std::string point_text(const std::vector<Rational> &p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + to_string(p[i]);
    return s + ")";
}

inline std::vector<std::string> variables_for(const HarnessOptions &o, std::size_t n) {
    if (o.variables.empty())
        return default_variables(n);
    if (o.variables.size() != n)
        throw Error(ErrorCode::AmbientMismatch, "variable list does not match the ring");
    return o.variables;
}

inline std::vector<std::string> texts(const std::vector<Polynomial> &ps, const std::vector<std::string> &vars) {
    std::vector<std::string> out;
    for (const auto &p : ps)
        out.push_back(format_polynomial(p, vars));
    return out;
}

inline ComputedEntry entry(std::string label, DeRhamResult r, std::size_t support_dim) {
    ComputedEntry e{std::move(label), std::move(r), support_dim, true};
    e.vanishing_bound = !e.result.stabilized || check_theorem3_bound(e.result, support_dim);
    return e;
}

// Compares one computed entry to an expectation, recording failures.
inline void compare(VerificationReport &rep, const ComputedEntry &c, const ExpectedEntry &e) {
    if (!c.result.stabilized)
        return;
    if (!matches_pattern(e.cohomological, c.result.cohomological_dims))
        rep.failures.push_back(c.label + ": expected " + dims_text(e.cohomological) + " (" + e.label + "), computed " +
                               dims_text(c.result.cohomological_dims));
}

inline void sanity(VerificationReport &rep, const ComputedEntry &c) {
    if (!c.result.stabilized)
        return;
    if (!c.result.concentrated)
        rep.failures.push_back(c.label + ": total cohomology outside the expected band " +
                               dims_text(c.result.tot_dims));
    if (!c.vanishing_bound)
        rep.failures.push_back(c.label + ": vanishing bound violated for support dimension " +
                               std::to_string(c.support_dim));
}

inline void finish(VerificationReport &rep) {
    for (const auto &c : rep.computed)
        sanity(rep, c);
    bool all_stable = std::all_of(rep.computed.begin(), rep.computed.end(),
                                  [](const ComputedEntry &c) { return c.result.stabilized; });
    if (!rep.failures.empty())
        rep.verdict = Verdict::Fail;
    else if (!all_stable)
        rep.verdict = Verdict::Inconclusive;
    else
        rep.verdict = Verdict::Pass;
}

inline std::vector<std::optional<std::size_t>> cohomological(const ExpectedDims &e) {
    return {e.homological.rbegin(), e.homological.rend()};
}

} // namespace detail

/// dim H^n(d; H^n_I(R)) = #V(I) and H^i = 0 for i < n, for zero-dimensional I.
/// Path B: Cech-De Rham totalization on the radical. Path A (rational points
/// only): E at each point, realized at the origin through a translation.
inline VerificationReport verify_theorem1(const Ideal &ideal, const HarnessOptions &opts = {}) {
    const std::size_t n = ideal.ambient();
    VerificationReport rep;
    rep.theorem = "theorem1";
    rep.n = n;
    rep.seed = opts.seed;
    rep.options = opts.stabilization;
    rep.variables = detail::variables_for(opts, n);
    rep.ideal = detail::texts(ideal.generators(), rep.variables);

    auto g = groebner(ideal, MonomialOrder::degrevlex(n));
    if (g.is_unit())
        throw Error(ErrorCode::UnitIdeal, "ideal is the whole ring");
    auto length = staircase_dim(g);
    if (!length)
        throw Error(ErrorCode::NotZeroDimensional, "R/I is infinite dimensional");
    rep.facts.emplace_back("length", std::to_string(*length));

    const std::size_t count = affine_point_count(ideal);
    rep.facts.emplace_back("affine_point_count", std::to_string(count));
    std::vector<std::optional<std::size_t>> want(n + 1, 0);
    want[n] = count;
    rep.expected.push_back({"theorem1", "H^n = #V(I), H^i = 0 for i < n", want});

    auto radical = groebner(zero_dim_radical(ideal), MonomialOrder::degrevlex(n));
    rep.cech_generators = detail::texts(radical.basis, rep.variables);
    auto layout = Layout::cech(std::make_shared<CechSpec>(n, radical.basis));
    rep.computed.push_back(
        detail::entry("path_b", derham_dims(layout, standard_partials(n), n, opts.stabilization), 0));

    auto points = comaximal_points(ideal);
    if (points) {
        std::string listed;
        DeRhamResult sum;
        sum.n = n;
        sum.c = n;
        sum.stabilized = true;
        sum.strategy = opts.stabilization.strategy;
        std::vector<std::size_t> total(n + 1, 0);
        auto e_family = std::make_shared<InjectiveHullFamily>(n);
        auto e_closed = detail::cohomological(closed_form(ModuleClass::E, n));
        for (const auto &pt : *points) {
            listed += (listed.empty() ? "" : " ") + detail::point_text(pt);
            auto ops = operators_for(translate_point(pt));
            auto r = derham_dims(Layout::single(e_family), ops, 0, opts.stabilization);
            if (r.stabilized && !matches_pattern(e_closed, r.cohomological_dims))
                rep.failures.push_back("path_a: E at " + detail::point_text(pt) + " gave " +
                                       detail::dims_text(r.cohomological_dims));
            for (std::size_t q = 0; q <= n; ++q)
                total[q] += r.cohomological_dims[q];
            sum.stabilized = sum.stabilized && r.stabilized;
            for (auto &w : r.window_trace)
                sum.window_trace.push_back(std::move(w));
            sum.gradings = r.gradings;
        }
        sum.tot_dims = total;
        sum.cohomological_dims = total;
        sum.homological_dims.assign(total.rbegin(), total.rend());
        rep.facts.emplace_back("rational_points", listed);
        rep.computed.push_back(detail::entry("path_a", std::move(sum), 0));
    } else {
        rep.facts.emplace_back("rational_points", "unavailable: some point is not rational");
    }

    for (const auto &c : rep.computed)
        detail::compare(rep, c, rep.expected.front());
    if (const auto *a = rep.find("path_a"); a && a->result.stabilized) {
        const auto *b = rep.find("path_b");
        if (b->result.stabilized && a->result.cohomological_dims != b->result.cohomological_dims)
            rep.failures.push_back("path_a and path_b disagree: " + detail::dims_text(a->result.cohomological_dims) +
                                   " vs " + detail::dims_text(b->result.cohomological_dims));
    }
    detail::finish(rep);
    return rep;
}

/// For homogeneous I of height n - 1 with r = #V*(I):
/// H^{n-1} = r, H^n = r - 1, H^i = 0 for i <= n - 2.
inline VerificationReport verify_theorem2(const Ideal &ideal, const HarnessOptions &opts = {}) {
    const std::size_t n = ideal.ambient();
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "a height n-1 ideal needs n >= 2");
    if (!ideal.is_homogeneous())
        throw Error(ErrorCode::NotHomogeneous, "generators are not homogeneous");
    VerificationReport rep;
    rep.theorem = "theorem2";
    rep.n = n;
    rep.seed = opts.seed;
    rep.options = opts.stabilization;
    rep.variables = detail::variables_for(opts, n);
    rep.ideal = detail::texts(ideal.generators(), rep.variables);

    auto g = groebner(ideal, MonomialOrder::degrevlex(n));
    if (g.is_unit())
        throw Error(ErrorCode::UnitIdeal, "ideal is the whole ring");
    std::size_t dim = krull_dim(g);
    rep.facts.emplace_back("krull_dim", std::to_string(dim));
    if (dim != 1)
        throw Error(ErrorCode::WrongHeight, "height is not n - 1");

    auto count = projective_point_count_detailed(ideal, {opts.seed, opts.retries});
    rep.facts.emplace_back("projective_point_count", std::to_string(count.points));
    rep.facts.emplace_back("change_attempts", std::to_string(count.attempts));
    std::string matrix;
    for (std::size_t r = 0; r < n; ++r) {
        matrix += r ? ";" : "";
        for (std::size_t c = 0; c < n; ++c)
            matrix += (c ? "," : "") + to_string(count.change.matrix().at(r, c));
    }
    rep.facts.emplace_back("change_matrix", matrix);

    std::vector<std::optional<std::size_t>> want(n + 1, 0);
    want[n - 1] = count.points;
    want[n] = count.points - 1;
    rep.expected.push_back({"theorem2", "H^{n-1} = r, H^n = r - 1, H^i = 0 for i <= n - 2", want});

    rep.cech_generators = detail::texts(g.basis, rep.variables);
    auto layout = Layout::cech(std::make_shared<CechSpec>(n, g.basis));
    rep.computed.push_back(
        detail::entry("path_b", derham_dims(layout, standard_partials(n), n - 1, opts.stabilization), 1));
    detail::compare(rep, rep.computed.front(), rep.expected.front());
    detail::finish(rep);
    return rep;
}

/// x_1, x_1 x_2, x_1^2 - x_2^2 (only x_1 when n = 1).
inline std::vector<Polynomial> default_f_list(std::size_t n) {
    auto x = Polynomial::variable(n, 0);
    if (n == 1)
        return {x};
    auto y = Polynomial::variable(n, 1);
    return {x, x * y, x * x - y * y};
}

/// Closed forms for E, R, H^{n-1}_P(R), and the R_f / H^1_(f)(R) bookkeeping.
inline VerificationReport verify_building_blocks(std::size_t n, const HarnessOptions &opts = {},
                                                 std::optional<std::vector<Polynomial>> f_list = std::nullopt) {
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "n must be positive");
    VerificationReport rep;
    rep.theorem = "blocks";
    rep.n = n;
    rep.seed = opts.seed;
    rep.options = opts.stabilization;
    rep.variables = detail::variables_for(opts, n);
    const auto &so = opts.stabilization;
    auto partials = standard_partials(n);

    auto check = [&](const std::string &label, ModuleClass cls, DeRhamResult r, std::size_t support, std::string why) {
        ExpectedEntry e{label, std::move(why), detail::cohomological(closed_form(cls, n))};
        rep.expected.push_back(e);
        rep.computed.push_back(detail::entry(label, std::move(r), support));
        detail::compare(rep, rep.computed.back(), e);
    };

    check("E", ModuleClass::E, derham_dims(Layout::single(std::make_shared<InjectiveHullFamily>(n)), partials, 0, so),
          0, "H_0 = K, H_i = 0 for i > 0");
    check("R", ModuleClass::R, derham_dims(Layout::single(polynomial_ring(n)), partials, 0, so), n,
          "H_n = K, H_i = 0 for i < n");
    if (n >= 2) {
        check("HP", ModuleClass::HP, derham_dims(Layout::single(std::make_shared<EPolyFamily>(n)), partials, 0, so), 1,
              "H_1 = K, H_i = 0 otherwise");
        std::vector<Polynomial> p;
        for (std::size_t v = 0; v + 1 < n; ++v)
            p.push_back(Polynomial::variable(n, v));
        check("HP_cech", ModuleClass::HP,
              derham_dims(Layout::cech(std::make_shared<CechSpec>(n, p)), partials, n - 1, so), 1,
              "H_1 = K, H_i = 0 otherwise");
    }
    for (const auto &f : f_list ? *f_list : default_f_list(n)) {
        if (f.ambient() != n)
            throw Error(ErrorCode::AmbientMismatch, "f lives in a different ring");
        std::string tag = "[" + format_polynomial(f, rep.variables) + "]";
        check("Rf" + tag, ModuleClass::Rf,
              derham_dims(Layout::single(std::make_shared<LocalizationFamily>(f)), partials, 0, so), n,
              "H_n(R_f) = K");
        check("H1f" + tag, ModuleClass::LocalCohomologyF,
              derham_dims(Layout::cech(std::make_shared<CechSpec>(n, std::vector<Polynomial>{f})), partials, 1, so),
              n - 1, "H_n(H^1_(f)) = 0");
        const auto &rf = rep.computed[rep.computed.size() - 2].result;
        const auto &hf = rep.computed.back().result;
        if (rf.stabilized && hf.stabilized)
            for (std::size_t i = 0; i < n; ++i)
                if (rf.homological_dims[i] != hf.homological_dims[i])
                    rep.failures.push_back("H1f" + tag + ": H_" + std::to_string(i) + " differs from R_f");
    }
    detail::finish(rep);
    return rep;
}

} // namespace derham
