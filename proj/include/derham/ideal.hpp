#pragma once

#include "derham/error.hpp"
#include "derham/linalg.hpp"
#include "derham/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Monomial orders: lex and degrevlex under a variable ranking, and block
/// elimination orders (degree in the eliminated block first, then degrevlex).
class MonomialOrder {
  public:
    enum class Kind { Lex, DegRevLex, Elimination };

    static MonomialOrder lex(std::size_t n) { return MonomialOrder(Kind::Lex, identity(n), {}); }
    static MonomialOrder lex(std::vector<std::size_t> ranking) {
        return MonomialOrder(Kind::Lex, std::move(ranking), {});
    }
    static MonomialOrder degrevlex(std::size_t n) { return MonomialOrder(Kind::DegRevLex, identity(n), {}); }
    static MonomialOrder degrevlex(std::vector<std::size_t> ranking) {
        return MonomialOrder(Kind::DegRevLex, std::move(ranking), {});
    }
    static MonomialOrder elimination(std::size_t n, std::vector<std::size_t> eliminated) {
        return MonomialOrder(Kind::Elimination, identity(n), std::move(eliminated));
    }

    Kind kind() const { return kind_; }
    const std::vector<std::size_t> &ranking() const { return ranking_; }
    const std::vector<std::size_t> &eliminated() const { return block_; }

    std::string name() const {
        switch (kind_) {
        case Kind::Lex: return "lex";
        case Kind::DegRevLex: return "degrevlex";
        case Kind::Elimination: return "elimination";
        }
        return "?";
    }

    /// Strict "a < b".
    bool less(const Monomial &a, const Monomial &b) const {
        switch (kind_) {
        case Kind::Lex:
            for (std::size_t v : ranking_)
                if (a[v] != b[v])
                    return a[v] < b[v];
            return false;
        case Kind::DegRevLex:
            return grevlex_less(a, b);
        case Kind::Elimination: {
            int ba = 0, bb = 0;
            for (std::size_t v : block_) {
                ba += a[v];
                bb += b[v];
            }
            if (ba != bb)
                return ba < bb;
            return grevlex_less(a, b);
        }
        }
        return false;
    }

    bool is_natural_degrevlex() const {
        if (kind_ != Kind::DegRevLex)
            return false;
        for (std::size_t i = 0; i < ranking_.size(); ++i)
            if (ranking_[i] != i)
                return false;
        return true;
    }

  private:
    MonomialOrder(Kind kind, std::vector<std::size_t> ranking, std::vector<std::size_t> block)
        : kind_(kind), ranking_(std::move(ranking)), block_(std::move(block)) {}

    static std::vector<std::size_t> identity(std::size_t n) {
        std::vector<std::size_t> r(n);
        std::iota(r.begin(), r.end(), 0);
        return r;
    }

    bool grevlex_less(const Monomial &a, const Monomial &b) const {
        int da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        for (std::size_t k = ranking_.size(); k-- > 0;) {
            std::size_t v = ranking_[k];
            if (a[v] != b[v])
                return a[v] > b[v];
        }
        return false;
    }

    Kind kind_;
    std::vector<std::size_t> ranking_;
    std::vector<std::size_t> block_;
};

struct LeadingTerm {
    Monomial monomial;
    Rational coefficient;
};

inline LeadingTerm leading_term(const Polynomial &p, const MonomialOrder &order) {
    if (p.is_zero())
        throw Error(ErrorCode::ZeroInput, "leading term of the zero polynomial");
    if (order.is_natural_degrevlex())
        return {p.leading_monomial(), p.leading_coefficient()};
    auto best = p.terms().begin();
    for (auto it = std::next(best); it != p.terms().end(); ++it)
        if (order.less(best->first, it->first))
            best = it;
    return {best->first, best->second};
}

/// Ideal of K[X_1..X_n] given by nonzero generators.
class Ideal {
  public:
    Ideal(std::size_t n, std::vector<Polynomial> generators) : n_(n) {
        for (auto &g : generators) {
            if (g.ambient() != n)
                throw Error(ErrorCode::AmbientMismatch, "generator lives in a different ring");
            if (!g.is_zero())
                generators_.push_back(std::move(g));
        }
        if (generators_.empty())
            throw Error(ErrorCode::InvalidArgument, "an ideal needs at least one nonzero generator");
    }

    std::size_t ambient() const { return n_; }
    const std::vector<Polynomial> &generators() const { return generators_; }

    Ideal operator+(const Ideal &o) const {
        if (o.n_ != n_)
            throw Error(ErrorCode::AmbientMismatch, "sum of ideals in different rings");
        auto gens = generators_;
        gens.insert(gens.end(), o.generators_.begin(), o.generators_.end());
        return Ideal(n_, std::move(gens));
    }

    Ideal with(const Polynomial &p) const {
        auto gens = generators_;
        gens.push_back(p);
        return Ideal(n_, std::move(gens));
    }

    bool is_homogeneous() const {
        return std::all_of(generators_.begin(), generators_.end(),
                           [](const Polynomial &g) { return g.is_homogeneous(); });
    }

  private:
    std::size_t n_;
    std::vector<Polynomial> generators_;
};

/// Reduced Groebner basis: monic, sorted by increasing leading monomial.
struct GroebnerBasis {
    MonomialOrder order;
    std::size_t ambient = 0;
    std::vector<Polynomial> basis;

    bool is_unit() const { return basis.size() == 1 && basis.front().is_constant(); }

    std::vector<Monomial> leading_monomials() const {
        std::vector<Monomial> lms;
        for (const auto &g : basis)
            lms.push_back(leading_term(g, order).monomial);
        return lms;
    }
};

namespace detail {

struct Reducer {
    const std::vector<Polynomial> *basis;
    std::vector<LeadingTerm> leads;
    const MonomialOrder *order;

    Reducer(const std::vector<Polynomial> &b, const MonomialOrder &o) : basis(&b), order(&o) {
        for (const auto &g : b)
            leads.push_back(leading_term(g, o));
    }

    Polynomial reduce(Polynomial p, std::optional<std::size_t> skip = std::nullopt) const {
        Polynomial r(p.ambient());
        while (!p.is_zero()) {
            LeadingTerm lt = leading_term(p, *order);
            bool reduced = false;
            for (std::size_t k = 0; k < leads.size(); ++k) {
                if (skip && *skip == k)
                    continue;
                if (!leads[k].monomial.divides(lt.monomial))
                    continue;
                p -= (*basis)[k].multiply_term(lt.monomial / leads[k].monomial,
                                               lt.coefficient / leads[k].coefficient);
                reduced = true;
                break;
            }
            if (!reduced) {
                r.add_term(lt.monomial, lt.coefficient);
                p.add_term(lt.monomial, -lt.coefficient);
            }
        }
        return r;
    }
};

inline Polynomial s_polynomial(const Polynomial &f, const Polynomial &g, const MonomialOrder &order) {
    auto lf = leading_term(f, order), lg = leading_term(g, order);
    Monomial l = lf.monomial.lcm(lg.monomial);
    return f.multiply_term(l / lf.monomial, Rational(1) / lf.coefficient) -
           g.multiply_term(l / lg.monomial, Rational(1) / lg.coefficient);
}

} // namespace detail

/// Buchberger's algorithm with the product and chain criteria.
inline GroebnerBasis groebner(const Ideal &ideal, const MonomialOrder &order) {
    const std::size_t n = ideal.ambient();
    std::vector<Polynomial> g;
    for (const auto &p : ideal.generators()) {
        if (p.is_constant())
            return {order, n, {Polynomial::constant(n, 1)}};
        g.push_back(p * (Rational(1) / leading_term(p, order).coefficient));
    }
    std::vector<Monomial> lm;
    for (const auto &p : g)
        lm.push_back(leading_term(p, order).monomial);

    using Pair = std::pair<std::size_t, std::size_t>;
    std::set<Pair> pending;
    for (std::size_t j = 0; j < g.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            pending.insert({i, j});

    auto is_pending = [&](std::size_t a, std::size_t b) {
        return pending.count({std::min(a, b), std::max(a, b)}) > 0;
    };

    while (!pending.empty()) {
        // Normal selection strategy: smallest lcm first.
        auto pick = pending.begin();
        Monomial best = lm[pick->first].lcm(lm[pick->second]);
        for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
            Monomial l = lm[it->first].lcm(lm[it->second]);
            if (order.less(l, best)) {
                best = l;
                pick = it;
            }
        }
        auto [i, j] = *pick;
        pending.erase(pick);
        if (lm[i].coprime(lm[j]))
            continue;
        bool chain = false;
        for (std::size_t k = 0; k < g.size() && !chain; ++k) {
            if (k == i || k == j || !lm[k].divides(best))
                continue;
            chain = !is_pending(i, k) && !is_pending(j, k);
        }
        if (chain)
            continue;
        detail::Reducer reducer(g, order);
        Polynomial s = reducer.reduce(detail::s_polynomial(g[i], g[j], order));
        if (s.is_zero())
            continue;
        if (s.is_constant())
            return {order, n, {Polynomial::constant(n, 1)}};
        auto lt = leading_term(s, order);
        g.push_back(s * (Rational(1) / lt.coefficient));
        lm.push_back(lt.monomial);
        for (std::size_t k = 0; k + 1 < g.size(); ++k)
            pending.insert({k, g.size() - 1});
    }

    // Minimalize: drop elements whose leading monomial is divisible by another's.
    std::vector<bool> keep(g.size(), true);
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = 0; b < g.size() && keep[a]; ++b) {
            if (a == b || !keep[b] || !lm[b].divides(lm[a]))
                continue;
            if (lm[a] != lm[b] || b < a)
                keep[a] = false;
        }
    }
    std::vector<Polynomial> minimal;
    for (std::size_t a = 0; a < g.size(); ++a)
        if (keep[a])
            minimal.push_back(g[a]);
    // Inter-reduce tails.
    for (std::size_t a = 0; a < minimal.size(); ++a) {
        detail::Reducer reducer(minimal, order);
        auto lt = leading_term(minimal[a], order);
        Polynomial tail = minimal[a];
        tail.add_term(lt.monomial, -lt.coefficient);
        Polynomial reduced = reducer.reduce(tail, a);
        reduced.add_term(lt.monomial, lt.coefficient);
        minimal[a] = reduced * (Rational(1) / lt.coefficient);
    }
    std::sort(minimal.begin(), minimal.end(), [&](const Polynomial &a, const Polynomial &b) {
        return order.less(leading_term(a, order).monomial, leading_term(b, order).monomial);
    });
    return {order, n, std::move(minimal)};
}

inline Polynomial normal_form(const Polynomial &p, const GroebnerBasis &g) {
    if (p.ambient() != g.ambient)
        throw Error(ErrorCode::AmbientMismatch, "normal form across rings");
    detail::Reducer reducer(g.basis, g.order);
    return reducer.reduce(p);
}

inline bool ideal_contains(const GroebnerBasis &g, const Polynomial &p) { return normal_form(p, g).is_zero(); }

/// dim_K R/I as the number of standard monomials; nullopt when infinite.
inline std::optional<std::size_t> staircase_dim(const GroebnerBasis &g) {
    if (g.is_unit())
        return 0;
    const std::size_t n = g.ambient;
    auto lms = g.leading_monomials();
    std::vector<int> bound(n, -1);
    for (const auto &m : lms) {
        std::size_t support = 0, var = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (m[v] > 0) {
                ++support;
                var = v;
            }
        if (support == 1 && (bound[var] < 0 || m[var] < bound[var]))
            bound[var] = m[var];
    }
    if (std::any_of(bound.begin(), bound.end(), [](int b) { return b < 0; }))
        return std::nullopt;
    std::size_t count = 0;
    std::vector<int> e(n, 0);
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == n) {
            Monomial m(e);
            for (const auto &lm : lms)
                if (lm.divides(m))
                    return;
            ++count;
            return;
        }
        for (int k = 0; k < bound[v]; ++k) {
            e[v] = k;
            walk(v + 1);
        }
        e[v] = 0;
    };
    walk(0);
    return count;
}

/// Standard monomials of a zero-dimensional basis, in increasing degrevlex order.
inline std::vector<Monomial> standard_monomials(const GroebnerBasis &g) {
    if (!staircase_dim(g))
        throw Error(ErrorCode::NotZeroDimensional, "staircase is unbounded");
    std::vector<Monomial> out;
    if (g.is_unit())
        return out;
    const std::size_t n = g.ambient;
    auto lms = g.leading_monomials();
    std::vector<int> bound(n, 0);
    for (const auto &m : lms)
        for (std::size_t v = 0; v < n; ++v)
            bound[v] = std::max(bound[v], m[v]);
    std::vector<int> e(n, 0);
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == n) {
            Monomial m(e);
            for (const auto &lm : lms)
                if (lm.divides(m))
                    return;
            out.push_back(m);
            return;
        }
        for (int k = 0; k <= bound[v]; ++k) {
            e[v] = k;
            walk(v + 1);
        }
        e[v] = 0;
    };
    walk(0);
    std::sort(out.begin(), out.end(), DegRevLexLess{});
    return out;
}

/// Krull dimension of R/I: the largest set of variables no leading monomial
/// is supported in.
inline std::size_t krull_dim(const GroebnerBasis &g) {
    if (g.is_unit())
        throw Error(ErrorCode::UnitIdeal, "Krull dimension of the zero ring");
    const std::size_t n = g.ambient;
    auto lms = g.leading_monomials();
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        auto size = static_cast<std::size_t>(__builtin_popcount(mask));
        if (size <= best)
            continue;
        bool independent = true;
        for (const auto &m : lms) {
            bool inside = true;
            for (std::size_t v = 0; v < n && inside; ++v)
                if (m[v] > 0 && !(mask & (1u << v)))
                    inside = false;
            if (inside) {
                independent = false;
                break;
            }
        }
        if (independent)
            best = size;
    }
    return best;
}

namespace detail {

inline GroebnerBasis zero_dimensional_basis(const Ideal &ideal) {
    auto g = groebner(ideal, MonomialOrder::degrevlex(ideal.ambient()));
    if (g.is_unit())
        throw Error(ErrorCode::UnitIdeal, "ideal is the whole ring");
    if (!staircase_dim(g))
        throw Error(ErrorCode::NotZeroDimensional, "quotient ring is infinite dimensional");
    return g;
}

} // namespace detail

/// Monic generator of I ∩ K[X_i], by finding the first linear dependence
/// among the normal forms of 1, X_i, X_i^2, ...
inline Polynomial minimal_polynomial(const Ideal &ideal, std::size_t i) {
    const std::size_t n = ideal.ambient();
    if (i >= n)
        throw Error(ErrorCode::IndexOutOfRange, "variable index " + std::to_string(i));
    auto g = detail::zero_dimensional_basis(ideal);
    auto basis = standard_monomials(g);
    std::map<Monomial, std::size_t> index;
    for (std::size_t k = 0; k < basis.size(); ++k)
        index.emplace(basis[k], k);
    Polynomial x = Polynomial::variable(n, i);
    Polynomial current = normal_form(Polynomial::constant(n, 1), g);
    std::vector<Polynomial> forms;
    for (std::size_t k = 0; k <= basis.size(); ++k) {
        forms.push_back(current);
        RationalMatrix m(basis.size(), forms.size());
        for (std::size_t c = 0; c < forms.size(); ++c)
            for (const auto &[mono, coeff] : forms[c].terms())
                m.set(index.at(mono), c, coeff);
        if (rank(m) < forms.size()) {
            auto kernel = nullspace(m);
            Polynomial mp(n);
            for (std::size_t c = 0; c < forms.size(); ++c)
                mp.add_term(Monomial::variable(n, i, static_cast<int>(c)), kernel.at(c, 0));
            return mp.monic();
        }
        current = normal_form(current * x, g);
    }
    throw std::logic_error("minimal polynomial search exceeded the quotient dimension");
}

/// I + (squarefree part of each coordinate minimal polynomial).
inline Ideal zero_dim_radical(const Ideal &ideal) {
    detail::zero_dimensional_basis(ideal);
    auto gens = ideal.generators();
    for (std::size_t i = 0; i < ideal.ambient(); ++i)
        gens.push_back(squarefree_part(minimal_polynomial(ideal, i)));
    return Ideal(ideal.ambient(), std::move(gens));
}

/// Number of points of V(I) over the algebraic closure.
inline std::size_t affine_point_count(const Ideal &ideal) {
    auto g = groebner(zero_dim_radical(ideal), MonomialOrder::degrevlex(ideal.ambient()));
    return *staircase_dim(g);
}

namespace detail {

// I + (t*p - 1) in K[X_1..X_n, t], t the last variable.
inline Ideal rabinowitsch(const Ideal &ideal, const Polynomial &p) {
    const std::size_t n = ideal.ambient();
    std::vector<Polynomial> gens;
    for (const auto &g : ideal.generators())
        gens.push_back(g.embed(n + 1));
    gens.push_back(p.embed(n + 1) * Polynomial::variable(n + 1, n) - Polynomial::constant(n + 1, 1));
    return Ideal(n + 1, std::move(gens));
}

} // namespace detail

/// I : f^infinity by eliminating t from I + (t*f - 1).
inline Ideal saturate(const Ideal &ideal, const Polynomial &f) {
    if (f.is_zero())
        throw Error(ErrorCode::ZeroDivisor, "saturation by zero");
    const std::size_t n = ideal.ambient();
    if (f.ambient() != n)
        throw Error(ErrorCode::AmbientMismatch, "saturating polynomial lives in a different ring");
    auto g = groebner(detail::rabinowitsch(ideal, f), MonomialOrder::elimination(n + 1, {n}));
    std::vector<Polynomial> kept;
    for (const auto &p : g.basis) {
        bool has_t = std::any_of(p.terms().begin(), p.terms().end(),
                                 [n](const auto &t) { return t.first[n] > 0; });
        if (!has_t)
            kept.push_back(p.restrict_to(n));
    }
    return Ideal(n, std::move(kept));
}

inline bool radical_membership(const Polynomial &p, const Ideal &ideal) {
    if (p.ambient() != ideal.ambient())
        throw Error(ErrorCode::AmbientMismatch, "membership across rings");
    if (p.is_zero())
        return true;
    return groebner(detail::rabinowitsch(ideal, p), MonomialOrder::degrevlex(ideal.ambient() + 1)).is_unit();
}

inline Ideal substitute_affine(const Ideal &ideal, const AffineChange &t) {
    std::vector<Polynomial> gens;
    for (const auto &g : ideal.generators())
        gens.push_back(substitute_affine(g, t));
    return Ideal(ideal.ambient(), std::move(gens));
}

struct ProjectiveCountOptions {
    std::uint64_t seed = 1;
    std::size_t retries = 32;
};

struct ProjectiveCount {
    std::size_t points;
    AffineChange change;  // the homogeneous change that moved all points off X_n = 0
    std::size_t attempts; // random draws consumed, including singular ones
};

/// #V*(I) in P^{n-1} over the algebraic closure, for homogeneous I with
/// dim R/I = 1. A random homogeneous change (entries in -5..5) is drawn
/// until no point lies on X_n = 0; the count is then the affine count of the
/// dehomogenization at X_n = 1.
inline ProjectiveCount projective_point_count_detailed(const Ideal &ideal, const ProjectiveCountOptions &opts = {}) {
    const std::size_t n = ideal.ambient();
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "projective counting needs n >= 2");
    if (!ideal.is_homogeneous())
        throw Error(ErrorCode::NotHomogeneous, "generators are not homogeneous");
    auto g = groebner(ideal, MonomialOrder::degrevlex(n));
    if (g.is_unit())
        throw Error(ErrorCode::UnitIdeal, "ideal is the whole ring");
    if (krull_dim(g) != 1)
        throw Error(ErrorCode::WrongHeight, "height is not n - 1");
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> entry(-5, 5);
    const Polynomial last = Polynomial::variable(n, n - 1);
    for (std::size_t attempt = 1; attempt <= opts.retries; ++attempt) {
        RationalMatrix d(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                d.set(r, c, entry(rng));
        if (rank(d) != n)
            continue;
        AffineChange change(d, std::vector<Rational>(n));
        Ideal moved = substitute_affine(ideal, change);
        auto at_infinity = groebner(moved.with(last), MonomialOrder::degrevlex(n));
        if (!staircase_dim(at_infinity))
            continue;
        Ideal chart = moved.with(last - Polynomial::constant(n, 1));
        return {affine_point_count(chart), change, attempt};
    }
    throw Error(ErrorCode::NoGoodChangeFound,
                "no change of variables cleared the hyperplane at infinity in " + std::to_string(opts.retries) +
                    " attempts");
}

inline std::size_t projective_point_count(const Ideal &ideal, const ProjectiveCountOptions &opts = {}) {
    return projective_point_count_detailed(ideal, opts).points;
}

} // namespace derham
