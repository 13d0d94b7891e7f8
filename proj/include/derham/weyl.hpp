#pragma once

#include "derham/error.hpp"
#include "derham/linalg.hpp"
#include "derham/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Element of the Weyl algebra A_n(K), stored normal-ordered as
/// sum c * x^alpha * d^beta (multiplications to the left of derivations).
class WeylElement {
  public:
    using Key = std::pair<Monomial, Monomial>;
    using Terms = std::map<Key, Rational>;

    WeylElement() = default;
    explicit WeylElement(std::size_t n) : n_(n) {}

    static WeylElement constant(std::size_t n, const Rational &c) {
        WeylElement w(n);
        w.add_term(Monomial(n), Monomial(n), c);
        return w;
    }
    static WeylElement x(std::size_t n, std::size_t i) {
        check_var(n, i);
        WeylElement w(n);
        w.add_term(Monomial::variable(n, i), Monomial(n), 1);
        return w;
    }
    static WeylElement d(std::size_t n, std::size_t i) {
        check_var(n, i);
        WeylElement w(n);
        w.add_term(Monomial(n), Monomial::variable(n, i), 1);
        return w;
    }
    static WeylElement from_polynomial(const Polynomial &p) {
        WeylElement w(p.ambient());
        for (const auto &[m, c] : p.terms())
            w.add_term(m, Monomial(p.ambient()), c);
        return w;
    }

    std::size_t ambient() const { return n_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial &xa, const Monomial &db, const Rational &c) {
        if (xa.size() != n_ || db.size() != n_)
            throw Error(ErrorCode::AmbientMismatch, "Weyl term has the wrong length");
        if (derham::is_zero(c))
            return;
        auto [it, inserted] = terms_.try_emplace({xa, db}, c);
        if (!inserted) {
            it->second += c;
            if (derham::is_zero(it->second))
                terms_.erase(it);
        }
    }

    WeylElement &operator+=(const WeylElement &o) {
        require_same(o);
        for (const auto &[k, c] : o.terms_)
            add_term(k.first, k.second, c);
        return *this;
    }
    WeylElement &operator-=(const WeylElement &o) {
        require_same(o);
        for (const auto &[k, c] : o.terms_)
            add_term(k.first, k.second, -c);
        return *this;
    }
    WeylElement operator-() const {
        WeylElement w(*this);
        for (auto &[k, c] : w.terms_)
            c = -c;
        return w;
    }
    friend WeylElement operator+(WeylElement a, const WeylElement &b) { return a += b; }
    friend WeylElement operator-(WeylElement a, const WeylElement &b) { return a -= b; }
    friend WeylElement operator*(const Rational &s, WeylElement a) {
        if (derham::is_zero(s))
            return WeylElement(a.n_);
        for (auto &[k, c] : a.terms_)
            c *= s;
        return a;
    }

    /// Normal-ordered product. Per variable,
    /// d^b x^c = sum_k binom(b,k) c!/(c-k)! x^{c-k} d^{b-k}.
    friend WeylElement operator*(const WeylElement &a, const WeylElement &b) {
        a.require_same(b);
        const std::size_t n = a.n_;
        WeylElement out(n);
        for (const auto &[ka, ca] : a.terms_) {
            for (const auto &[kb, cb] : b.terms_) {
                // Expand variable by variable, accumulating (x shift, d shift, coefficient).
                std::vector<std::pair<std::vector<int>, Rational>> partial{{std::vector<int>(n, 0), ca * cb}};
                for (std::size_t v = 0; v < n; ++v) {
                    int beta = ka.second[v], gamma = kb.first[v];
                    if (beta == 0 || gamma == 0)
                        continue;
                    std::vector<std::pair<std::vector<int>, Rational>> next;
                    for (const auto &[ks, coeff] : partial) {
                        Integer falling = 1;
                        for (int k = 0; k <= std::min(beta, gamma); ++k) {
                            if (k > 0)
                                falling *= gamma - k + 1;
                            Integer binom;
                            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(beta),
                                         static_cast<unsigned long>(k));
                            auto shifted = ks;
                            shifted[v] = k;
                            next.emplace_back(std::move(shifted), coeff * Rational(binom * falling));
                        }
                    }
                    partial = std::move(next);
                }
                for (const auto &[ks, coeff] : partial) {
                    std::vector<int> xe(n), de(n);
                    for (std::size_t v = 0; v < n; ++v) {
                        xe[v] = ka.first[v] + kb.first[v] - ks[v];
                        de[v] = ka.second[v] + kb.second[v] - ks[v];
                    }
                    out.add_term(Monomial(std::move(xe)), Monomial(std::move(de)), coeff);
                }
            }
        }
        return out;
    }

    friend bool operator==(const WeylElement &a, const WeylElement &b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

  private:
    static void check_var(std::size_t n, std::size_t i) {
        if (i >= n)
            throw Error(ErrorCode::IndexOutOfRange, "variable index " + std::to_string(i));
    }
    void require_same(const WeylElement &o) const {
        if (o.n_ != n_)
            throw Error(ErrorCode::AmbientMismatch, "Weyl elements in different rings");
    }

    std::size_t n_ = 0;
    Terms terms_;
};

inline WeylElement weyl_mul(const WeylElement &a, const WeylElement &b) { return a * b; }

inline WeylElement commutator(const WeylElement &a, const WeylElement &b) { return a * b - b * a; }

/// Left action on R: x^alpha multiplies, d^beta differentiates.
inline Polynomial apply_to_polynomial(const WeylElement &d, const Polynomial &p) {
    if (d.ambient() != p.ambient())
        throw Error(ErrorCode::AmbientMismatch, "operator and polynomial in different rings");
    const std::size_t n = p.ambient();
    Polynomial out(n);
    for (const auto &[key, c] : d.terms()) {
        Polynomial q = p;
        for (std::size_t v = 0; v < n && !q.is_zero(); ++v)
            for (int k = 0; k < key.second[v]; ++k)
                q = q.partial(v);
        out += q.multiply_term(key.first, c);
    }
    return out;
}

/// F = (D^{-1})^T: the new partial d/dU_i equals sum_j F_ij d/dX_j.
inline RationalMatrix operator_matrix(const AffineChange &t) {
    auto inv = inverse(t.matrix());
    if (!inv)
        throw Error(ErrorCode::SingularChange, "change-of-variables matrix is singular");
    return inv->transpose();
}

inline std::vector<WeylElement> transform_operators(const AffineChange &t) {
    const std::size_t n = t.size();
    RationalMatrix f = operator_matrix(t);
    std::vector<WeylElement> ops;
    for (std::size_t i = 0; i < n; ++i) {
        WeylElement w(n);
        for (const auto &[j, c] : f.row(i))
            w.add_term(Monomial(n), Monomial::variable(n, j), c);
        ops.push_back(std::move(w));
    }
    return ops;
}

/// Coefficients c_j when w = sum_j c_j d_j; nullopt otherwise.
inline std::optional<std::vector<Rational>> constant_partial_coefficients(const WeylElement &w) {
    const std::size_t n = w.ambient();
    std::vector<Rational> c(n);
    for (const auto &[key, coeff] : w.terms()) {
        if (!key.first.is_one() || key.second.degree() != 1)
            return std::nullopt;
        for (std::size_t j = 0; j < n; ++j)
            if (key.second[j] == 1)
                c[j] = coeff;
    }
    return c;
}

} // namespace derham
