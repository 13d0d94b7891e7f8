#pragma once

#include <gmpxx.h>

#include <string>

namespace derham {

/// Arbitrary-precision rationals. gmpxx keeps results canonical
/// (gcd(num, den) = 1, den > 0) for all arithmetic on canonical inputs.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational &q) { return q.get_str(); }

inline bool is_zero(const Rational &q) { return sgn(q) == 0; }

} // namespace derham
