#pragma once

#include "derham/error.hpp"
#include "derham/ideal.hpp"
#include "derham/linalg.hpp"
#include "derham/poly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Basis labels are small integer vectors whose meaning depends on the family.
using Label = std::vector<int>;
using LinComb = std::map<Label, Rational>;

inline void add_term(LinComb &into, const Label &l, const Rational &c) {
    if (is_zero(c))
        return;
    auto [it, inserted] = into.try_emplace(l, c);
    if (!inserted) {
        it->second += c;
        if (is_zero(it->second))
            into.erase(it);
    }
}

inline void add_scaled(LinComb &into, const LinComb &from, const Rational &scale) {
    for (const auto &[l, c] : from)
        add_term(into, l, c * scale);
}

namespace detail {

// All exponent vectors of length n with |e| <= max_degree, in lexicographic order.
inline void for_each_exponent(std::size_t n, int max_degree, const std::function<void(const std::vector<int> &)> &fn) {
    if (max_degree < 0)
        return;
    std::vector<int> e(n, 0);
    std::function<void(std::size_t, int)> walk = [&](std::size_t v, int budget) {
        if (v == n) {
            fn(e);
            return;
        }
        for (int k = 0; k <= budget; ++k) {
            e[v] = k;
            walk(v + 1, budget - k);
        }
        e[v] = 0;
    };
    walk(0, max_degree);
}

inline long dot(const std::vector<int> &w, const Label &l, std::size_t offset, std::size_t count) {
    long s = 0;
    for (std::size_t v = 0; v < count; ++v)
        s += static_cast<long>(w[v]) * l[offset + v];
    return s;
}

} // namespace detail

/// An A_n(K)-module with a distinguished basis, exhausted by finite windows.
/// basis(level, span) is nested in both arguments, and every partial maps
/// basis(level, span) into basis(level + 1, span).
class ModuleFamily {
  public:
    virtual ~ModuleFamily() = default;

    virtual std::string name() const = 0;
    virtual std::size_t ambient() const = 0;
    virtual std::vector<Label> basis(int level, int span) const = 0;
    virtual LinComb partial(std::size_t u, const Label &l) const = 0;
    /// Weight of a basis vector under an integer grading of the variables;
    /// nullopt when the family is not graded by w.
    virtual std::optional<long> weight(const Label &l, const std::vector<int> &w) const = 0;
    virtual std::string describe(const Label &l) const = 0;

    bool homogeneous(const std::vector<int> &w) const { return weight(probe(), w).has_value(); }

  protected:
    virtual Label probe() const = 0;
};

using FamilyPtr = std::shared_ptr<const ModuleFamily>;

namespace detail {

inline std::string monomial_text(const std::vector<int> &e, std::size_t offset, std::size_t count) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t v = 0; v < count; ++v) {
        int k = e[offset + v];
        if (k == 0)
            continue;
        if (any)
            os << '*';
        os << "x" << (v + 1);
        if (k > 1)
            os << '^' << k;
        any = true;
    }
    if (!any)
        os << '1';
    return os.str();
}

} // namespace detail

/// R_g with basis x^alpha (k = 0) and x^alpha / g^k (k >= 1, LM(g) not
/// dividing x^alpha). Label = (k, alpha). The window at (level, span) is
/// k <= level and |alpha| - k deg g <= span + level. For constant g this is
/// the polynomial ring itself.
class LocalizationFamily : public ModuleFamily {
  public:
    explicit LocalizationFamily(Polynomial g) : g_(std::move(g)) {
        if (g_.is_zero())
            throw Error(ErrorCode::ZeroDivisor, "localization at zero");
        n_ = g_.ambient();
        unit_ = g_.is_constant();
        deg_ = g_.degree().value();
        if (!unit_)
            lm_ = g_.leading_monomial();
        for (std::size_t u = 0; u < n_; ++u)
            dg_.push_back(g_.partial(u));
    }

    const Polynomial &denominator() const { return g_; }
    bool is_polynomial_ring() const { return unit_; }

    std::string name() const override {
        return unit_ ? "R" : "R_g";
    }
    std::size_t ambient() const override { return n_; }

    std::vector<Label> basis(int level, int span) const override {
        std::vector<Label> out;
        const int top = span + level;
        detail::for_each_exponent(n_, top, [&](const std::vector<int> &e) { out.push_back(make_label(0, e)); });
        if (unit_)
            return out;
        for (int k = 1; k <= level; ++k) {
            detail::for_each_exponent(n_, top + k * deg_, [&](const std::vector<int> &e) {
                if (!lm_.divides(Monomial(e)))
                    out.push_back(make_label(k, e));
            });
        }
        return out;
    }

    LinComb partial(std::size_t u, const Label &l) const override {
        if (u >= n_)
            throw Error(ErrorCode::IndexOutOfRange, "partial index " + std::to_string(u));
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find({u, l});
            if (it != cache_.end())
                return it->second;
        }
        const int k = l[0];
        Monomial m = monomial(l);
        LinComb out;
        if (m[u] > 0)
            add_scaled(out, normalize(Polynomial::term(m, 1).partial(u), k), 1);
        if (k > 0 && !dg_[u].is_zero())
            add_scaled(out, normalize(dg_[u].multiply_term(m, -k), k + 1), 1);
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(std::make_pair(u, l), out);
        return out;
    }

    std::optional<long> weight(const Label &l, const std::vector<int> &w) const override {
        if (!g_.is_homogeneous(w))
            return std::nullopt;
        long wg = Polynomial::weighted_degree(g_.leading_monomial(), w);
        return detail::dot(w, l, 1, n_) - static_cast<long>(l[0]) * wg;
    }

    std::string describe(const Label &l) const override {
        std::string num = detail::monomial_text(l, 1, n_);
        if (l[0] == 0)
            return num;
        return num + "/g^" + std::to_string(l[0]);
    }

    /// a / g^k expanded in the basis, by repeated division by g.
    LinComb normalize(Polynomial a, int k) const {
        LinComb out;
        if (unit_) {
            Rational scale = 1;
            for (int i = 0; i < k; ++i)
                scale /= g_.constant_term();
            for (const auto &[m, c] : a.terms())
                add_term(out, make_label(0, m), c * scale);
            return out;
        }
        while (k > 0 && !a.is_zero()) {
            auto [q, r] = divide(a, g_);
            for (const auto &[m, c] : r.terms())
                add_term(out, make_label(k, m), c);
            a = std::move(q);
            --k;
        }
        for (const auto &[m, c] : a.terms())
            add_term(out, make_label(0, m), c);
        return out;
    }

    Monomial monomial(const Label &l) const { return Monomial(std::vector<int>(l.begin() + 1, l.end())); }

  protected:
    Label probe() const override { return Label(n_ + 1, 0); }

  private:
    Label make_label(int k, const Monomial &m) const {
        Label l(n_ + 1);
        l[0] = k;
        for (std::size_t v = 0; v < n_; ++v)
            l[v + 1] = m[v];
        return l;
    }
    Label make_label(int k, const std::vector<int> &e) const {
        Label l(n_ + 1);
        l[0] = k;
        std::copy(e.begin(), e.end(), l.begin() + 1);
        return l;
    }

    Polynomial g_;
    std::size_t n_ = 0;
    bool unit_ = false;
    int deg_ = 0;
    Monomial lm_;
    std::vector<Polynomial> dg_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<std::size_t, Label>, LinComb> cache_;
};

inline FamilyPtr polynomial_ring(std::size_t n) {
    return std::make_shared<LocalizationFamily>(Polynomial::constant(n, 1));
}

/// E = H^n_m(R) at the origin: basis 1/(x_1..x_n x^r), label r, window |r| <= span + level.
class InjectiveHullFamily : public ModuleFamily {
  public:
    explicit InjectiveHullFamily(std::size_t n) : n_(n) {
        if (n == 0)
            throw Error(ErrorCode::InvalidArgument, "E needs n >= 1");
    }

    std::string name() const override { return "E"; }
    std::size_t ambient() const override { return n_; }

    std::vector<Label> basis(int level, int span) const override {
        std::vector<Label> out;
        detail::for_each_exponent(n_, span + level, [&](const std::vector<int> &e) { out.push_back(e); });
        return out;
    }

    LinComb partial(std::size_t u, const Label &r) const override {
        if (u >= n_)
            throw Error(ErrorCode::IndexOutOfRange, "partial index " + std::to_string(u));
        Label s = r;
        ++s[u];
        return {{s, Rational(-(r[u] + 1))}};
    }

    /// X_u lowers r_u, or kills the vector when r_u = 0.
    LinComb multiply(std::size_t u, const Label &r) const {
        if (u >= n_)
            throw Error(ErrorCode::IndexOutOfRange, "variable index " + std::to_string(u));
        if (r[u] == 0)
            return {};
        Label s = r;
        --s[u];
        return {{s, Rational(1)}};
    }

    std::optional<long> weight(const Label &r, const std::vector<int> &w) const override {
        long s = 0;
        for (std::size_t v = 0; v < n_; ++v)
            s -= static_cast<long>(w[v]) * (1 + r[v]);
        return s;
    }

    std::string describe(const Label &r) const override {
        std::vector<int> e(r);
        for (auto &v : e)
            ++v;
        return "1/(" + detail::monomial_text(e, 0, n_) + ")";
    }

  protected:
    Label probe() const override { return Label(n_, 0); }

  private:
    std::size_t n_;
};

/// E_{n-1}[X_n] = H^{n-1}_P(R) for P = (X_1..X_{n-1}): label (r_1..r_{n-1}, j)
/// standing for X_n^j / (X_1..X_{n-1} x^r). Window |r| <= span + level and
/// j <= span + level.
class EPolyFamily : public ModuleFamily {
  public:
    explicit EPolyFamily(std::size_t n) : n_(n) {
        if (n < 2)
            throw Error(ErrorCode::InvalidArgument, "E_{n-1}[X_n] needs n >= 2");
    }

    std::string name() const override { return "HP"; }
    std::size_t ambient() const override { return n_; }

    std::vector<Label> basis(int level, int span) const override {
        std::vector<Label> out;
        const int top = span + level;
        detail::for_each_exponent(n_ - 1, top, [&](const std::vector<int> &e) {
            for (int j = 0; j <= top; ++j) {
                Label l(e);
                l.push_back(j);
                out.push_back(std::move(l));
            }
        });
        return out;
    }

    LinComb partial(std::size_t u, const Label &l) const override {
        if (u >= n_)
            throw Error(ErrorCode::IndexOutOfRange, "partial index " + std::to_string(u));
        Label s = l;
        if (u + 1 == n_) {
            if (l[u] == 0)
                return {};
            --s[u];
            return {{s, Rational(l[u])}};
        }
        ++s[u];
        return {{s, Rational(-(l[u] + 1))}};
    }

    std::optional<long> weight(const Label &l, const std::vector<int> &w) const override {
        long s = static_cast<long>(w[n_ - 1]) * l[n_ - 1];
        for (std::size_t v = 0; v + 1 < n_; ++v)
            s -= static_cast<long>(w[v]) * (1 + l[v]);
        return s;
    }

    std::string describe(const Label &l) const override {
        std::vector<int> e(l.begin(), l.end() - 1);
        for (auto &v : e)
            ++v;
        std::string s = "x" + std::to_string(n_) + "^" + std::to_string(l.back());
        return s + "/(" + detail::monomial_text(e, 0, n_ - 1) + ")";
    }

  protected:
    Label probe() const override { return Label(n_, 0); }

  private:
    std::size_t n_;
};

struct EActions {
    LinComb x_action;
    LinComb d_action;
};

inline EActions e_module_actions(std::size_t n, std::size_t i, const Label &r) {
    InjectiveHullFamily e(n);
    return {e.multiply(i, r), e.partial(i, r)};
}

inline LinComb epoly_module_actions(std::size_t n, std::size_t i, const Label &l) { return EPolyFamily(n).partial(i, l); }

/// Restricts a family's windows to one all-ones degree strand [lo, hi].
struct TruncationWindow {
    int k_cap = 4;
    int degree_span = 2;
    std::optional<int> degree_lo;
    std::optional<int> degree_hi;
};

/// Finite truncation of a module: a window's basis and the partials into the
/// next window.
struct ModuleSlice {
    std::vector<Label> basis;
    std::vector<Label> target_basis;
    std::vector<RationalMatrix> actions;
    TruncationWindow window;
};

namespace detail {

inline std::vector<Label> strand(const ModuleFamily &f, std::vector<Label> labels, std::optional<int> lo,
                                 std::optional<int> hi) {
    if (!lo && !hi)
        return labels;
    std::vector<int> ones(f.ambient(), 1);
    if (!f.homogeneous(ones))
        throw Error(ErrorCode::NotHomogeneous, "degree strands need a graded module");
    std::vector<Label> out;
    for (auto &l : labels) {
        long d = *f.weight(l, ones);
        if ((!lo || d >= *lo) && (!hi || d <= *hi))
            out.push_back(std::move(l));
    }
    return out;
}

inline std::map<Label, std::size_t> index_of(const std::vector<Label> &labels) {
    std::map<Label, std::size_t> idx;
    for (std::size_t k = 0; k < labels.size(); ++k)
        idx.emplace(labels[k], k);
    return idx;
}

} // namespace detail

inline ModuleSlice build_slice(const ModuleFamily &f, const TruncationWindow &w) {
    if (w.k_cap < 0 || w.degree_span < 0)
        throw Error(ErrorCode::InvalidArgument, "window caps must be non-negative");
    ModuleSlice s;
    s.window = w;
    s.basis = detail::strand(f, f.basis(w.k_cap, w.degree_span), w.degree_lo, w.degree_hi);
    auto shift = [](std::optional<int> d) { return d ? std::optional<int>(*d - 1) : std::nullopt; };
    s.target_basis = detail::strand(f, f.basis(w.k_cap + 1, w.degree_span), shift(w.degree_lo), shift(w.degree_hi));
    auto target = detail::index_of(s.target_basis);
    for (std::size_t u = 0; u < f.ambient(); ++u) {
        RationalMatrix m(s.target_basis.size(), s.basis.size());
        for (std::size_t c = 0; c < s.basis.size(); ++c) {
            for (const auto &[l, v] : f.partial(u, s.basis[c])) {
                auto it = target.find(l);
                if (it == target.end())
                    throw std::logic_error("partial leaves the target window: " + f.describe(l));
                m.set(it->second, c, v);
            }
        }
        s.actions.push_back(std::move(m));
    }
    return s;
}

/// a / f^k kept in lowest terms: f does not divide a when k > 0.
class FractionElement {
  public:
    FractionElement(Polynomial numerator, int k) : a_(std::move(numerator)), k_(k) {
        if (k < 0)
            throw Error(ErrorCode::InvalidArgument, "negative denominator exponent");
    }

    const Polynomial &numerator() const { return a_; }
    int exponent() const { return k_; }

    FractionElement normalized(const Polynomial &f) const {
        if (f.is_zero())
            throw Error(ErrorCode::ZeroDivisor, "fraction over zero");
        if (a_.is_zero())
            return FractionElement(a_, 0);
        Polynomial a = a_;
        int k = k_;
        while (k > 0) {
            auto q = divide_exact(a, f);
            if (!q)
                break;
            a = std::move(*q);
            --k;
        }
        return FractionElement(std::move(a), k);
    }

    /// Cross-multiplied comparison a/f^k == b/f^m.
    bool equals(const FractionElement &o, const Polynomial &f) const {
        int top = std::max(k_, o.k_);
        return a_ * f.pow(static_cast<unsigned>(top - k_)) == o.a_ * f.pow(static_cast<unsigned>(top - o.k_));
    }

  private:
    Polynomial a_;
    int k_;
};

/// Quotient rule: d_i(a/f^k) = (f d_i a - k a d_i f) / f^{k+1}, then lowest terms.
inline FractionElement localized_partial(std::size_t i, const FractionElement &x, const Polynomial &f) {
    const Polynomial &a = x.numerator();
    const int k = x.exponent();
    if (k == 0)
        return FractionElement(a.partial(i), 0).normalized(f);
    Polynomial num = f * a.partial(i) - a * f.partial(i) * Polynomial::constant(a.ambient(), k);
    return FractionElement(std::move(num), k + 1).normalized(f);
}

/// U_i = X_i - a_i.
inline AffineChange translate_point(const std::vector<Rational> &point) {
    std::vector<Rational> shift;
    for (const auto &a : point)
        shift.push_back(-a);
    return AffineChange(RationalMatrix::identity(point.size()), std::move(shift));
}

namespace detail {

inline std::vector<Integer> divisors(Integer v) {
    v = abs(v);
    std::vector<Integer> out;
    for (Integer d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            if (d * d != v)
                out.push_back(v / d);
        }
    }
    return out;
}

// Distinct rational roots of a univariate polynomial, sorted.
inline std::vector<Rational> rational_roots(const Polynomial &u, std::size_t var) {
    auto coeffs = to_univariate(u, var);
    Integer l = 1;
    for (const auto &c : coeffs)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> a;
    for (const auto &c : coeffs)
        a.push_back(Integer(c * l));
    std::set<Rational> roots;
    std::size_t shift = 0;
    while (shift < a.size() && a[shift] == 0)
        ++shift;
    if (shift > 0)
        roots.insert(Rational(0));
    a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(shift));
    if (a.size() > 1) {
        auto eval = [&](const Rational &x) {
            Rational s = 0;
            for (std::size_t k = a.size(); k-- > 0;)
                s = s * x + Rational(a[k]);
            return s;
        };
        for (const auto &p : divisors(a.front()))
            for (const auto &q : divisors(a.back()))
                for (int sign : {1, -1}) {
                    Rational x(Integer(sign * p), q);
                    x.canonicalize();
                    if (is_zero(eval(x)))
                        roots.insert(x);
                }
    }
    return {roots.begin(), roots.end()};
}

} // namespace detail

/// The points of V(I) when all of them are rational; nullopt otherwise.
inline std::optional<std::vector<std::vector<Rational>>> comaximal_points(const Ideal &ideal) {
    const std::size_t n = ideal.ambient();
    std::size_t count = affine_point_count(ideal);
    std::vector<std::vector<Rational>> coordinate_roots;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial sq = squarefree_part(minimal_polynomial(ideal, i));
        auto roots = detail::rational_roots(sq, i);
        if (static_cast<int>(roots.size()) != sq.degree().value())
            return std::nullopt;
        coordinate_roots.push_back(std::move(roots));
    }
    std::vector<std::vector<Rational>> points;
    std::vector<Rational> point(n);
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == n) {
            for (const auto &g : ideal.generators())
                if (!is_zero(g.evaluate(point)))
                    return;
            points.push_back(point);
            return;
        }
        for (const auto &r : coordinate_roots[v]) {
            point[v] = r;
            walk(v + 1);
        }
    };
    walk(0);
    if (points.size() != count)
        return std::nullopt;
    return points;
}

/// Cech complex on generators g_1..g_s: position p is the sum over
/// size-p subsets T (lexicographic) of R_{g_T}.
class CechSpec {
  public:
    CechSpec(std::size_t n, std::vector<Polynomial> generators) : n_(n), generators_(std::move(generators)) {
        if (generators_.empty())
            throw Error(ErrorCode::InvalidArgument, "Cech complex needs generators");
        for (const auto &g : generators_) {
            if (g.ambient() != n)
                throw Error(ErrorCode::AmbientMismatch, "Cech generator in a different ring");
            if (g.is_zero())
                throw Error(ErrorCode::ZeroDivisor, "Cech generator is zero");
        }
        const std::size_t s = generators_.size();
        if (s > 20)
            throw Error(ErrorCode::InvalidArgument, "too many Cech generators");
        for (std::size_t p = 0; p <= s; ++p) {
            std::vector<std::vector<std::size_t>> level;
            std::vector<std::size_t> cur;
            std::function<void(std::size_t)> choose = [&](std::size_t start) {
                if (cur.size() == p) {
                    level.push_back(cur);
                    return;
                }
                for (std::size_t i = start; i < s; ++i) {
                    cur.push_back(i);
                    choose(i + 1);
                    cur.pop_back();
                }
            };
            choose(0);
            subsets_.push_back(std::move(level));
        }
        for (const auto &level : subsets_) {
            for (const auto &t : level) {
                Polynomial g = Polynomial::constant(n, 1);
                for (std::size_t i : t)
                    g = g * generators_[i];
                families_.emplace(t, std::make_shared<LocalizationFamily>(g));
            }
        }
    }

    std::size_t ambient() const { return n_; }
    const std::vector<Polynomial> &generators() const { return generators_; }
    std::size_t positions() const { return generators_.size() + 1; }
    const std::vector<std::vector<std::size_t>> &subsets(std::size_t p) const { return subsets_.at(p); }
    std::shared_ptr<const LocalizationFamily> family(const std::vector<std::size_t> &t) const {
        return families_.at(t);
    }

    /// (-1)^{#{t in T : t < i}}.
    static int sign(const std::vector<std::size_t> &t, std::size_t i) {
        std::size_t below = static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [i](std::size_t v) { return v < i; }));
        return below % 2 == 0 ? 1 : -1;
    }

    /// x^alpha / g_T^k -> x^alpha g_i^k / g_{T+i}^k, unsigned and normalized.
    LinComb extend(const std::vector<std::size_t> &t, std::size_t i, const Label &l) const {
        auto target = t;
        target.insert(std::upper_bound(target.begin(), target.end(), i), i);
        const auto &src = *family(t);
        Polynomial a = Polynomial::term(src.monomial(l), 1) * generators_[i].pow(static_cast<unsigned>(l[0]));
        return family(target)->normalize(std::move(a), l[0]);
    }

  private:
    std::size_t n_;
    std::vector<Polynomial> generators_;
    std::vector<std::vector<std::vector<std::size_t>>> subsets_;
    std::map<std::vector<std::size_t>, std::shared_ptr<const LocalizationFamily>> families_;
};

/// Cech basis vectors are tagged by their subset.
struct CechLabel {
    std::vector<std::size_t> subset;
    Label label;
    auto operator<=>(const CechLabel &) const = default;
};

struct CechSlices {
    std::vector<std::vector<CechLabel>> bases;   // one per position
    std::vector<RationalMatrix> differentials;   // position p -> p + 1
};

inline CechSlices cech_inclusion_matrices(const CechSpec &spec, const TruncationWindow &w) {
    CechSlices out;
    const std::size_t s = spec.generators().size();
    for (std::size_t p = 0; p <= s; ++p) {
        std::vector<CechLabel> basis;
        for (const auto &t : spec.subsets(p)) {
            const auto &f = *spec.family(t);
            for (auto &l : detail::strand(f, f.basis(w.k_cap, w.degree_span), w.degree_lo, w.degree_hi))
                basis.push_back({t, std::move(l)});
        }
        out.bases.push_back(std::move(basis));
    }
    for (std::size_t p = 0; p < s; ++p) {
        std::map<CechLabel, std::size_t> target;
        for (std::size_t k = 0; k < out.bases[p + 1].size(); ++k)
            target.emplace(out.bases[p + 1][k], k);
        RationalMatrix d(out.bases[p + 1].size(), out.bases[p].size());
        for (std::size_t c = 0; c < out.bases[p].size(); ++c) {
            const auto &[t, l] = out.bases[p][c];
            for (std::size_t i = 0; i < s; ++i) {
                if (std::binary_search(t.begin(), t.end(), i))
                    continue;
                auto grown = t;
                grown.insert(std::upper_bound(grown.begin(), grown.end(), i), i);
                for (const auto &[l2, v] : spec.extend(t, i, l)) {
                    auto it = target.find({grown, l2});
                    if (it == target.end())
                        throw std::logic_error("Cech map leaves the window");
                    d.add_to(it->second, c, v * CechSpec::sign(t, i));
                }
            }
        }
        out.differentials.push_back(std::move(d));
    }
    return out;
}

} // namespace derham
