#pragma once

#include "derham/error.hpp"
#include "derham/linalg.hpp"
#include "derham/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Exponent vector of a monomial in n variables.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(std::size_t n) : e_(n, 0) {}
    explicit Monomial(std::vector<int> exponents) : e_(std::move(exponents)) {
        for (int x : e_)
            if (x < 0)
                throw Error(ErrorCode::InvalidArgument, "negative exponent");
    }
    Monomial(std::initializer_list<int> exponents) : Monomial(std::vector<int>(exponents)) {}

    static Monomial variable(std::size_t n, std::size_t i, int power = 1) {
        Monomial m(n);
        m.e_.at(i) = power;
        return m;
    }

    std::size_t size() const { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    const std::vector<int> &exponents() const { return e_; }

    int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

    bool is_one() const {
        return std::all_of(e_.begin(), e_.end(), [](int x) { return x == 0; });
    }

    bool divides(const Monomial &o) const {
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > o.e_[i])
                return false;
        return true;
    }

    Monomial operator*(const Monomial &o) const {
        Monomial m(*this);
        for (std::size_t i = 0; i < e_.size(); ++i)
            m.e_[i] += o.e_[i];
        return m;
    }

    /// Requires `o` to divide *this.
    Monomial operator/(const Monomial &o) const {
        Monomial m(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) {
            m.e_[i] -= o.e_[i];
            if (m.e_[i] < 0)
                throw Error(ErrorCode::InvalidArgument, "monomial does not divide");
        }
        return m;
    }

    Monomial lcm(const Monomial &o) const {
        Monomial m(*this);
        for (std::size_t i = 0; i < e_.size(); ++i)
            m.e_[i] = std::max(e_[i], o.e_[i]);
        return m;
    }

    bool coprime(const Monomial &o) const {
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > 0 && o.e_[i] > 0)
                return false;
        return true;
    }

    auto operator<=>(const Monomial &) const = default;

  private:
    std::vector<int> e_;
};

/// Graded reverse lexicographic "less than"; used as the storage order of
/// polynomial terms so the degrevlex-leading term is the last one.
struct DegRevLexLess {
    bool operator()(const Monomial &a, const Monomial &b) const {
        int da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i])
                return a[i] > b[i];
        }
        return false;
    }
};

/// Polynomial degree with an explicit marker for the zero polynomial.
class Degree {
  public:
    static Degree minus_infinity() { return Degree(); }
    static Degree of(int d) { return Degree(d); }

    bool is_minus_infinity() const { return !value_; }
    int value() const {
        if (!value_)
            throw Error(ErrorCode::InvalidArgument, "degree of the zero polynomial");
        return *value_;
    }

    friend bool operator==(const Degree &, const Degree &) = default;
    friend bool operator<(const Degree &a, const Degree &b) {
        if (!a.value_)
            return b.value_.has_value();
        return b.value_ && *a.value_ < *b.value_;
    }

  private:
    Degree() = default;
    explicit Degree(int d) : value_(d) {}
    std::optional<int> value_;
};

/// Sparse polynomial over Q in a fixed number of variables.
class Polynomial {
  public:
    using Terms = std::map<Monomial, Rational, DegRevLexLess>;

    Polynomial() = default;
    explicit Polynomial(std::size_t n) : n_(n) {}

    static Polynomial constant(std::size_t n, const Rational &c) {
        Polynomial p(n);
        if (!derham::is_zero(c))
            p.terms_.emplace(Monomial(n), c);
        return p;
    }

    static Polynomial variable(std::size_t n, std::size_t i) {
        if (i >= n)
            throw Error(ErrorCode::IndexOutOfRange, "variable index " + std::to_string(i));
        return term(Monomial::variable(n, i), 1);
    }

    static Polynomial term(const Monomial &m, const Rational &c) {
        Polynomial p(m.size());
        if (!derham::is_zero(c))
            p.terms_.emplace(m, c);
        return p;
    }

    std::size_t ambient() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    std::size_t term_count() const { return terms_.size(); }
    const Terms &terms() const { return terms_; }

    Rational coefficient(const Monomial &m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient(Monomial(n_)); }

    /// Degrevlex-leading monomial; requires a nonzero polynomial.
    const Monomial &leading_monomial() const { return nonzero_last().first; }
    const Rational &leading_coefficient() const { return nonzero_last().second; }

    Degree degree() const {
        if (terms_.empty())
            return Degree::minus_infinity();
        return Degree::of(terms_.rbegin()->first.degree());
    }

    bool is_homogeneous() const {
        if (terms_.empty())
            return true;
        int d = terms_.begin()->first.degree();
        return std::all_of(terms_.begin(), terms_.end(),
                           [d](const auto &t) { return t.first.degree() == d; });
    }

    /// True when every term has the same weighted degree under `weights`.
    bool is_homogeneous(const std::vector<int> &weights) const {
        std::optional<long> d;
        for (const auto &[m, c] : terms_) {
            long w = weighted_degree(m, weights);
            if (d && *d != w)
                return false;
            d = w;
        }
        return true;
    }

    static long weighted_degree(const Monomial &m, const std::vector<int> &weights) {
        long w = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            w += static_cast<long>(weights[i]) * m[i];
        return w;
    }

    void add_term(const Monomial &m, const Rational &c) {
        if (derham::is_zero(c))
            return;
        if (m.size() != n_)
            throw Error(ErrorCode::AmbientMismatch, "monomial length differs from ambient size");
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (derham::is_zero(it->second))
                terms_.erase(it);
        }
    }

    Polynomial &operator+=(const Polynomial &o) {
        require_same(o);
        for (const auto &[m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }

    Polynomial &operator-=(const Polynomial &o) {
        require_same(o);
        for (const auto &[m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }

    Polynomial &operator*=(const Rational &s) {
        if (derham::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto &t : terms_)
            t.second *= s;
        return *this;
    }

    Polynomial operator-() const {
        Polynomial p(*this);
        for (auto &t : p.terms_)
            t.second = -t.second;
        return p;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational &s) { return a *= s; }
    friend Polynomial operator*(const Rational &s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
        a.require_same(b);
        Polynomial p(a.n_);
        for (const auto &[ma, ca] : a.terms_)
            for (const auto &[mb, cb] : b.terms_)
                p.add_term(ma * mb, ca * cb);
        return p;
    }

    Polynomial multiply_term(const Monomial &m, const Rational &c) const {
        Polynomial p(n_);
        if (derham::is_zero(c))
            return p;
        for (const auto &[mm, cc] : terms_)
            p.terms_.emplace_hint(p.terms_.end(), mm * m, cc * c);
        return p;
    }

    Polynomial pow(unsigned k) const {
        Polynomial result = constant(n_, 1), base = *this;
        while (k) {
            if (k & 1u)
                result = result * base;
            k >>= 1u;
            if (k)
                base = base * base;
        }
        return result;
    }

    Polynomial partial(std::size_t i) const {
        if (i >= n_)
            throw Error(ErrorCode::IndexOutOfRange, "partial derivative index " + std::to_string(i));
        Polynomial p(n_);
        for (const auto &[m, c] : terms_) {
            if (m[i] == 0)
                continue;
            std::vector<int> e = m.exponents();
            e[i] -= 1;
            p.add_term(Monomial(std::move(e)), c * m[i]);
        }
        return p;
    }

    Rational evaluate(const std::vector<Rational> &point) const {
        if (point.size() != n_)
            throw Error(ErrorCode::AmbientMismatch, "evaluation point has wrong length");
        Rational total = 0;
        for (const auto &[m, c] : terms_) {
            Rational v = c;
            for (std::size_t i = 0; i < n_; ++i)
                for (int k = 0; k < m[i]; ++k)
                    v *= point[i];
            total += v;
        }
        return total;
    }

    /// Scaled so the degrevlex-leading coefficient is one (zero stays zero).
    Polynomial monic() const {
        if (terms_.empty())
            return *this;
        return *this * (Rational(1) / leading_coefficient());
    }

    /// Same polynomial viewed in a ring with `n` >= ambient() variables.
    Polynomial embed(std::size_t n) const {
        if (n < n_)
            throw Error(ErrorCode::AmbientMismatch, "cannot embed into a smaller ring");
        Polynomial p(n);
        for (const auto &[m, c] : terms_) {
            std::vector<int> e = m.exponents();
            e.resize(n, 0);
            p.terms_.emplace(Monomial(std::move(e)), c);
        }
        return p;
    }

    /// Drop trailing variables that do not occur.
    Polynomial restrict_to(std::size_t n) const {
        Polynomial p(n);
        for (const auto &[m, c] : terms_) {
            std::vector<int> e = m.exponents();
            for (std::size_t i = n; i < e.size(); ++i)
                if (e[i] != 0)
                    throw Error(ErrorCode::AmbientMismatch, "polynomial uses a dropped variable");
            e.resize(n);
            p.terms_.emplace(Monomial(std::move(e)), c);
        }
        return p;
    }

    friend bool operator==(const Polynomial &a, const Polynomial &b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

  private:
    const std::pair<const Monomial, Rational> &nonzero_last() const {
        if (terms_.empty())
            throw Error(ErrorCode::ZeroInput, "leading term of the zero polynomial");
        return *terms_.rbegin();
    }

    void require_same(const Polynomial &o) const {
        if (o.n_ != n_)
            throw Error(ErrorCode::AmbientMismatch,
                        "ambient sizes " + std::to_string(n_) + " and " + std::to_string(o.n_));
    }

    std::size_t n_ = 0;
    Terms terms_;
};

inline Polynomial partial_derivative(const Polynomial &p, std::size_t i) { return p.partial(i); }

struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};

/// Division by a single polynomial under degrevlex: a = q*f + r with no
/// term of r divisible by LM(f).
inline DivisionResult divide(const Polynomial &a, const Polynomial &f) {
    if (f.is_zero())
        throw Error(ErrorCode::ZeroDivisor, "division by the zero polynomial");
    if (a.ambient() != f.ambient())
        throw Error(ErrorCode::AmbientMismatch, "division across rings");
    const Monomial &lm = f.leading_monomial();
    const Rational lc = f.leading_coefficient();
    Polynomial q(a.ambient()), r(a.ambient()), p = a;
    while (!p.is_zero()) {
        Monomial m = p.leading_monomial();
        Rational c = p.leading_coefficient();
        if (lm.divides(m)) {
            Monomial t = m / lm;
            Rational s = c / lc;
            q.add_term(t, s);
            p -= f.multiply_term(t, s);
        } else {
            r.add_term(m, c);
            p.add_term(m, -c);
        }
    }
    return {std::move(q), std::move(r)};
}

/// Quotient a / f when f divides a exactly, nullopt otherwise.
inline std::optional<Polynomial> divide_exact(const Polynomial &a, const Polynomial &f) {
    auto [q, r] = divide(a, f);
    if (!r.is_zero())
        return std::nullopt;
    return q;
}

/// Invertible affine substitution X_i -> sum_j D_ij X_j + c_i.
class AffineChange {
  public:
    AffineChange(RationalMatrix matrix, std::vector<Rational> shift)
        : matrix_(std::move(matrix)), shift_(std::move(shift)) {
        if (matrix_.rows() != matrix_.cols() || shift_.size() != matrix_.rows())
            throw Error(ErrorCode::InvalidArgument, "affine change needs an n x n matrix and n shifts");
        if (rank(matrix_) != matrix_.rows())
            throw Error(ErrorCode::SingularChange, "change-of-variables matrix is singular");
    }

    static AffineChange identity(std::size_t n) {
        return AffineChange(RationalMatrix::identity(n), std::vector<Rational>(n));
    }

    std::size_t size() const { return shift_.size(); }
    const RationalMatrix &matrix() const { return matrix_; }
    const std::vector<Rational> &shift() const { return shift_; }

    bool is_homogeneous() const {
        return std::all_of(shift_.begin(), shift_.end(), [](const Rational &c) { return is_zero(c); });
    }

    /// The affine form U_i = sum_j D_ij X_j + c_i.
    Polynomial form(std::size_t i) const {
        const std::size_t n = size();
        Polynomial u = Polynomial::constant(n, shift_.at(i));
        for (const auto &[j, d] : matrix_.row(i))
            u.add_term(Monomial::variable(n, j), d);
        return u;
    }

    AffineChange inverse() const {
        auto inv = derham::inverse(matrix_);
        if (!inv)
            throw Error(ErrorCode::SingularChange, "change-of-variables matrix is singular");
        std::vector<Rational> c(size());
        for (std::size_t i = 0; i < size(); ++i)
            for (const auto &[j, v] : inv->row(i))
                c[i] -= v * shift_[j];
        return AffineChange(*inv, std::move(c));
    }

  private:
    RationalMatrix matrix_;
    std::vector<Rational> shift_;
};

/// p(U_1, ..., U_n) expanded in the X variables.
inline Polynomial substitute_affine(const Polynomial &p, const AffineChange &t) {
    const std::size_t n = p.ambient();
    if (t.size() != n)
        throw Error(ErrorCode::AmbientMismatch, "affine change has the wrong size");
    std::vector<std::vector<Polynomial>> powers(n);
    auto power = [&](std::size_t i, int k) -> const Polynomial & {
        auto &cache = powers[i];
        if (cache.empty())
            cache.push_back(Polynomial::constant(n, 1));
        while (static_cast<int>(cache.size()) <= k)
            cache.push_back(cache.back() * t.form(i));
        return cache[static_cast<std::size_t>(k)];
    };
    Polynomial out(n);
    for (const auto &[m, c] : p.terms()) {
        Polynomial term = Polynomial::constant(n, c);
        for (std::size_t i = 0; i < n; ++i)
            if (m[i] > 0)
                term = term * power(i, m[i]);
        out += term;
    }
    return out;
}

namespace detail {

// Dense univariate coefficient vector, lowest degree first, trimmed.
using Univariate = std::vector<Rational>;

inline void trim(Univariate &u) {
    while (!u.empty() && is_zero(u.back()))
        u.pop_back();
}

inline Univariate uni_rem(Univariate a, const Univariate &b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= f * b[i];
        trim(a);
    }
    return a;
}

inline Univariate uni_quo(Univariate a, const Univariate &b) {
    trim(a);
    if (a.size() < b.size())
        return {};
    Univariate q(a.size() - b.size() + 1);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= f * b[i];
        trim(a);
    }
    trim(q);
    return q;
}

inline Univariate uni_gcd(Univariate a, Univariate b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Univariate r = uni_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lc = a.back();
        for (auto &c : a)
            c /= lc;
    }
    return a;
}

} // namespace detail

/// Index of the single variable occurring in `u`, nullopt for constants.
/// Throws InvalidArgument when more than one variable occurs.
inline std::optional<std::size_t> univariate_variable(const Polynomial &u) {
    std::optional<std::size_t> var;
    for (const auto &[m, c] : u.terms()) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            if (var && *var != i)
                throw Error(ErrorCode::InvalidArgument, "polynomial is not univariate");
            var = i;
        }
    }
    return var;
}

inline detail::Univariate to_univariate(const Polynomial &u, std::size_t var) {
    detail::Univariate out;
    for (const auto &[m, c] : u.terms()) {
        auto k = static_cast<std::size_t>(m[var]);
        if (out.size() <= k)
            out.resize(k + 1);
        out[k] = c;
    }
    detail::trim(out);
    return out;
}

inline Polynomial from_univariate(const detail::Univariate &u, std::size_t n, std::size_t var) {
    Polynomial p(n);
    for (std::size_t k = 0; k < u.size(); ++k)
        p.add_term(Monomial::variable(n, var, static_cast<int>(k)), u[k]);
    return p;
}

/// u / gcd(u, u'), monic. Constants map to 1.
inline Polynomial squarefree_part(const Polynomial &u) {
    if (u.is_zero())
        throw Error(ErrorCode::ZeroInput, "squarefree part of zero");
    auto var = univariate_variable(u);
    if (!var)
        return Polynomial::constant(u.ambient(), 1);
    auto coeffs = to_univariate(u, *var);
    detail::Univariate deriv;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        deriv.push_back(coeffs[k] * static_cast<long>(k));
    auto g = detail::uni_gcd(coeffs, deriv);
    auto q = detail::uni_quo(coeffs, g);
    Rational lc = q.back();
    for (auto &c : q)
        c /= lc;
    return from_univariate(q, u.ambient(), *var);
}

} // namespace derham
