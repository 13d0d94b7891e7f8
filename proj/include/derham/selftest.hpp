#pragma once

#include "derham/harness.hpp"
#include "derham/sample.hpp"
#include "derham/syntax.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace derham {

struct PropertyCheck {
    explicit PropertyCheck(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t samples = 0;
    std::vector<std::string> failures;

    bool passed() const { return samples > 0 && failures.empty(); }
};

struct SelfTestOptions {
    std::uint64_t seed = 1;
    std::size_t algebra_samples = 100;
    std::size_t roundtrip_samples = 50;
    std::size_t changes_per_class = 3;
    StabilizationOptions stabilization;
};

struct SelfTestReport {
    std::vector<PropertyCheck> checks;
    std::vector<std::string> unstabilized;
    std::map<std::string, std::size_t> changes_per_class;

    const PropertyCheck *find(const std::string &name) const {
        for (const auto &c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }
    Verdict verdict() const {
        for (const auto &c : checks)
            if (!c.passed())
                return Verdict::Fail;
        return unstabilized.empty() ? Verdict::Pass : Verdict::Inconclusive;
    }
};

struct CorpusModule {
    std::string label;
    ModuleClass cls;
    Layout layout;
    std::size_t c;
    std::size_t support_dim;
};

/// Small modules of every class, used by the property checks.
inline std::vector<CorpusModule> selftest_corpus() {
    std::vector<CorpusModule> out;
    for (std::size_t n : {1u, 2u, 3u}) {
        std::string tag = "/n=" + std::to_string(n);
        out.push_back({"E" + tag, ModuleClass::E, Layout::single(std::make_shared<InjectiveHullFamily>(n)), 0, 0});
        out.push_back({"R" + tag, ModuleClass::R, Layout::single(polynomial_ring(n)), 0, n});
    }
    const std::size_t n = 2;
    auto vars = default_variables(n);
    out.push_back({"HP/n=2", ModuleClass::HP, Layout::single(std::make_shared<EPolyFamily>(n)), 0, 1});
    for (const auto &f : default_f_list(n)) {
        std::string tag = "[" + format_polynomial(f, vars) + "]";
        out.push_back({"Rf" + tag, ModuleClass::Rf, Layout::single(std::make_shared<LocalizationFamily>(f)), 0, n});
    }
    auto xy = Polynomial::variable(n, 0) * Polynomial::variable(n, 1);
    out.push_back({"H1f[x*y]", ModuleClass::LocalCohomologyF,
                   Layout::cech(std::make_shared<CechSpec>(n, std::vector<Polynomial>{xy})), 1, n - 1});
    return out;
}

namespace detail {

inline void check_euler(PropertyCheck &pc, const CorpusModule &m, const Operators &ops,
                        const StabilizationOptions &so) {
    std::vector<Grading> gradings;
    if (so.strategy == Strategy::Graded)
        gradings = valid_gradings(m.layout, ops);
    for (int cap : {so.caps.front(), so.caps.front() + so.gap}) {
        auto chain = assemble(m.layout, ops, {cap, so.degree_span}, gradings).homological();
        ++pc.samples;
        try {
            check_composites(chain);
            if (alternating_sum(chain.dims()) != alternating_sum(homology_dims(chain)))
                pc.failures.push_back(m.label + ": Euler characteristic mismatch at cap " + std::to_string(cap));
        } catch (const std::exception &e) {
            pc.failures.push_back(m.label + ": " + e.what());
        }
    }
}

inline void check_slices(PropertyCheck &pc, const CorpusModule &m, const StabilizationOptions &so) {
    std::set<const ModuleFamily *> seen;
    for (const auto &b : m.layout.blocks()) {
        if (!seen.insert(b.family.get()).second)
            continue;
        const auto &f = *b.family;
        for (int cap = 0; cap <= so.caps.back() + so.gap; cap += 2) {
            auto lo = build_slice(f, {cap, so.degree_span, std::nullopt, std::nullopt});
            auto hi = build_slice(f, {cap + 1, so.degree_span, std::nullopt, std::nullopt});
            ++pc.samples;
            if (hi.basis != lo.target_basis) {
                pc.failures.push_back(m.label + ": slice bases are not nested at cap " + std::to_string(cap));
                continue;
            }
            for (std::size_t i = 0; i < f.ambient(); ++i)
                for (std::size_t j = i + 1; j < f.ambient(); ++j)
                    if (!(hi.actions[i] * lo.actions[j] - hi.actions[j] * lo.actions[i]).is_zero_matrix())
                        pc.failures.push_back(m.label + ": partials " + std::to_string(i + 1) + "," +
                                              std::to_string(j + 1) + " do not commute at cap " +
                                              std::to_string(cap));
        }
    }
}

inline void check_algebra(PropertyCheck &leibniz, PropertyCheck &weyl, std::mt19937_64 &rng, std::size_t samples) {
    for (std::size_t s = 0; s < samples; ++s) {
        auto f = random_polynomial(rng, 3, 4, 5);
        auto g = random_polynomial(rng, 3, 4, 5);
        ++leibniz.samples;
        for (std::size_t i = 0; i < 3; ++i)
            if ((f * g).partial(i) != f.partial(i) * g + f * g.partial(i))
                leibniz.failures.push_back("Leibniz rule fails for sample " + std::to_string(s));
    }
    const std::size_t n = 2;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto expect = WeylElement::constant(n, i == j ? 1 : 0);
            ++weyl.samples;
            if (commutator(WeylElement::d(n, i), WeylElement::x(n, j)) != expect)
                weyl.failures.push_back("[d_" + std::to_string(i + 1) + ", x_" + std::to_string(j + 1) + "] is wrong");
        }
    for (std::size_t s = 0; s < samples; ++s) {
        auto a = random_weyl(rng, n, 2, 3);
        auto b = random_weyl(rng, n, 2, 3);
        auto c = random_weyl(rng, n, 2, 2);
        auto p = random_polynomial(rng, n, 4, 4);
        ++weyl.samples;
        if ((a * b) * c != a * (b * c))
            weyl.failures.push_back("associativity fails for sample " + std::to_string(s));
        if (apply_to_polynomial(a * b, p) != apply_to_polynomial(a, apply_to_polynomial(b, p)))
            weyl.failures.push_back("action is not multiplicative for sample " + std::to_string(s));
        if (a * (b + c) != a * b + a * c)
            weyl.failures.push_back("distributivity fails for sample " + std::to_string(s));
    }
}

inline void check_roundtrip(PropertyCheck &pc, std::mt19937_64 &rng, std::size_t samples) {
    const std::vector<std::string> vars{"x", "y", "z"};
    std::vector<std::string> sources{"x^2 - 1", "3/2*x*y + y^3", "-(x - y)^3", "(x+1)*(x-1) - x^2",
                                     "-x*-y", "2/4*z^0 + 0*x", "((x))^2*y^1 - 7/3"};
    for (std::size_t s = 0; s < samples; ++s)
        sources.push_back(format_polynomial(random_polynomial(rng, 3, 5, 6), vars));
    for (const auto &src : sources) {
        ++pc.samples;
        try {
            auto p = parse_polynomial(src, vars);
            auto text = format_polynomial(p, vars);
            auto q = parse_polynomial(text, vars);
            if (q != p || format_polynomial(q, vars) != text)
                pc.failures.push_back("round trip changes '" + src + "'");
        } catch (const Error &e) {
            pc.failures.push_back("'" + src + "': " + e.what());
        }
    }
}

} // namespace detail

/// Property corpus: Euler characteristics, slice commutation, invariance of
/// De Rham dimensions under linear changes, algebra identities, parser round
/// trips and the vanishing bound on every stabilized result.
inline SelfTestReport run_selftest(const SelfTestOptions &opts = {}) {
    SelfTestReport rep;
    PropertyCheck euler{"euler_characteristic"}, commute{"slice_commutation"},
        invariance{"change_of_variables"}, leibniz{"leibniz"}, weyl{"weyl_normal_ordering"},
        roundtrip{"parse_print_roundtrip"}, bound{"vanishing_bound"};
    std::mt19937_64 rng(opts.seed);
    const auto &so = opts.stabilization;

    auto record = [&](const std::string &label, const DeRhamResult &r, std::size_t support) {
        if (!r.stabilized) {
            rep.unstabilized.push_back(label);
            return;
        }
        ++bound.samples;
        if (!check_theorem3_bound(r, support))
            bound.failures.push_back(label + ": nonzero cohomology below n - dim support");
    };

    for (const auto &m : selftest_corpus()) {
        const std::size_t n = m.layout.ambient();
        auto partials = standard_partials(n);
        detail::check_euler(euler, m, partials, so);
        detail::check_slices(commute, m, so);
        auto base = derham_dims(m.layout, partials, m.c, so);
        record(m.label, base, m.support_dim);
        if (n < 2)
            continue;
        std::size_t changes = n == 2 ? opts.changes_per_class : 1;
        for (std::size_t k = 0; k < changes; ++k) {
            auto ops = operators_for(random_linear_change(rng, n));
            detail::check_euler(euler, m, ops, so);
            auto moved = derham_dims(m.layout, ops, m.c, so);
            std::string label = m.label + " change " + std::to_string(k + 1);
            record(label, moved, m.support_dim);
            if (!base.stabilized || !moved.stabilized)
                continue;
            ++invariance.samples;
            ++rep.changes_per_class[to_string(m.cls)];
            if (moved.cohomological_dims != base.cohomological_dims)
                invariance.failures.push_back(label + ": dims " + detail::dims_text(moved.cohomological_dims) +
                                              " differ from " + detail::dims_text(base.cohomological_dims));
        }
    }
    detail::check_algebra(leibniz, weyl, rng, opts.algebra_samples);
    detail::check_roundtrip(roundtrip, rng, opts.roundtrip_samples);
    rep.checks = {euler, commute, invariance, leibniz, weyl, roundtrip, bound};
    return rep;
}

} // namespace derham
