#include "derham/poly.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace derham;
using namespace derham::testing;

TEST(Poly, DifferenceOfSquares) { EXPECT_EQ((x() + y()) * (x() - y()), x() * x() - y() * y()); }

TEST(Poly, AdditiveInverse) {
    auto p = x() * y() + c(2, 3, 4);
    EXPECT_TRUE((p + (-p)).is_zero());
}

TEST(Poly, BinomialCube) {
    auto p = (x(1) + c(1, 1)).pow(3);
    Polynomial expected = x(1).pow(3) + c(1, 3) * x(1).pow(2) + c(1, 3) * x(1) + c(1, 1);
    EXPECT_EQ(p, expected);
}

TEST(Poly, AmbientMismatch) {
    try {
        (void)(x(2) + x(3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::AmbientMismatch);
    }
}

TEST(Poly, PartialDerivatives) {
    EXPECT_EQ(partial_derivative(x() * x() * y(), 0), c(2, 2) * x() * y());
    EXPECT_TRUE(partial_derivative(x() * x(), 1).is_zero());
    auto s = x() + y();
    EXPECT_EQ(partial_derivative(s.pow(3), 0), c(2, 3) * s.pow(2));
    try {
        partial_derivative(x(), 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
}

TEST(Poly, DivideExact) {
    auto q = divide_exact(x() * x() - y() * y(), x() - y());
    ASSERT_TRUE(q);
    EXPECT_EQ(*q, x() + y());
    EXPECT_FALSE(divide_exact(x(), y()));
    auto r = divide_exact(x() * x() * y() + x() * y() * y(), x() * y());
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, x() + y());
    try {
        divide_exact(x(), Polynomial(2));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroDivisor);
    }
}

TEST(Poly, HomogeneityAndDegree) {
    auto p = x() * x() * y() + y().pow(3);
    EXPECT_TRUE(p.is_homogeneous());
    EXPECT_EQ(p.degree().value(), 3);
    EXPECT_FALSE((x() * x() + x()).is_homogeneous());
    Polynomial zero(2);
    EXPECT_TRUE(zero.is_homogeneous());
    EXPECT_TRUE(zero.degree().is_minus_infinity());
    EXPECT_TRUE(zero.degree() < Degree::of(0));
}

TEST(Poly, SquarefreePart) {
    auto t = x(1);
    auto u = (t - c(1, 1)).pow(2) * (t + c(1, 2));
    EXPECT_EQ(squarefree_part(u), (t - c(1, 1)) * (t + c(1, 2)));
    EXPECT_EQ(squarefree_part(t * t + c(1, 1)), t * t + c(1, 1));
    EXPECT_EQ(squarefree_part(t.pow(3)), t);
    EXPECT_EQ(squarefree_part(c(2, 5) * y(2).pow(2)), y(2));
    try {
        squarefree_part(Polynomial(1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroInput);
    }
}

TEST(Affine, IdentityAndShift) {
    auto p = x() * x() * y() - c(2, 1, 3);
    EXPECT_EQ(substitute_affine(p, AffineChange::identity(2)), p);
    AffineChange shift(RationalMatrix::identity(1), {Rational(1)});
    EXPECT_EQ(substitute_affine(x(1), shift), x(1) + c(1, 1));
}

TEST(Affine, SingularChange) {
    try {
        AffineChange bad(RationalMatrix::from_rows({{1, 2}, {2, 4}}), {0, 0});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularChange);
    }
}

TEST(Affine, InverseRoundTrip) {
    std::mt19937_64 rng(17);
    AffineChange t(RationalMatrix::from_rows({{2, 1}, {1, 1}}), {make_rational(1, 2), -3});
    for (int k = 0; k < 25; ++k) {
        auto p = random_polynomial(rng, 2, 4, 5);
        EXPECT_EQ(substitute_affine(substitute_affine(p, t), t.inverse()), p);
    }
}

TEST(PolyProperties, Leibniz) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 100; ++k) {
        auto p = random_polynomial(rng, 3, 4, 4), q = random_polynomial(rng, 3, 4, 4);
        std::size_t i = rng() % 3;
        EXPECT_EQ(partial_derivative(p * q, i), p * partial_derivative(q, i) + q * partial_derivative(p, i));
    }
}

TEST(PolyProperties, SubstitutionIsRingHomomorphism) {
    std::mt19937_64 rng(29);
    AffineChange t(RationalMatrix::from_rows({{1, 2, 0}, {0, 1, -1}, {3, 0, 1}}), {1, 0, make_rational(-2, 3)});
    for (int k = 0; k < 30; ++k) {
        auto p = random_polynomial(rng, 3, 3, 4), q = random_polynomial(rng, 3, 3, 4);
        EXPECT_EQ(substitute_affine(p + q, t), substitute_affine(p, t) + substitute_affine(q, t));
        EXPECT_EQ(substitute_affine(p * q, t), substitute_affine(p, t) * substitute_affine(q, t));
    }
}

TEST(PolyProperties, DivideExactRecoversFactor) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 50; ++k) {
        auto a = random_polynomial(rng, 2, 4, 4), f = random_polynomial(rng, 2, 3, 3);
        if (f.is_zero())
            continue;
        auto q = divide_exact(a * f, f);
        ASSERT_TRUE(q);
        EXPECT_EQ(*q, a);
    }
}
