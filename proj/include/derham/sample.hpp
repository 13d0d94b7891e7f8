#pragma once

#include "derham/poly.hpp"
#include "derham/weyl.hpp"

#include <random>

namespace derham {

inline Polynomial random_polynomial(std::mt19937_64 &rng, std::size_t n, int max_degree, int terms) {
    std::uniform_int_distribution<int> exp(0, max_degree), coeff(-6, 6), den(1, 3);
    Polynomial p(n);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> e(n);
        int budget = max_degree;
        for (auto &v : e) {
            v = std::min(exp(rng), budget);
            budget -= v;
        }
        p.add_term(Monomial(e), make_rational(coeff(rng), den(rng)));
    }
    return p;
}

inline WeylElement random_weyl(std::mt19937_64 &rng, std::size_t n, int max_degree, int terms) {
    std::uniform_int_distribution<int> exp(0, max_degree), coeff(-4, 4), den(1, 2);
    WeylElement w(n);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> a(n), b(n);
        for (std::size_t v = 0; v < n; ++v) {
            a[v] = exp(rng);
            b[v] = exp(rng);
        }
        w.add_term(Monomial(a), Monomial(b), make_rational(coeff(rng), den(rng)));
    }
    return w;
}

/// Uniform integer entries in [-bound, bound], resampled until invertible.
inline AffineChange random_linear_change(std::mt19937_64 &rng, std::size_t n, int bound = 3) {
    std::uniform_int_distribution<int> entry(-bound, bound);
    for (;;) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m.set(i, j, entry(rng));
        if (rank(m) == n)
            return AffineChange(std::move(m), std::vector<Rational>(n));
    }
}

} // namespace derham
