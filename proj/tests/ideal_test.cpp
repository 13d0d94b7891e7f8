#include "derham/ideal.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace derham;
using namespace derham::testing;

namespace {

Ideal ideal2(std::vector<Polynomial> g) { return Ideal(2, std::move(g)); }

} // namespace

TEST(Groebner, AlreadyReduced) {
    auto g = groebner(ideal2({x(), y()}), MonomialOrder::lex(2));
    EXPECT_EQ(g.basis, (std::vector<Polynomial>{y(), x()}));
    auto h = groebner(ideal2({x() * x() - c(2, 1), y()}), MonomialOrder::degrevlex(2));
    EXPECT_EQ(h.basis, (std::vector<Polynomial>{y(), x() * x() - c(2, 1)}));
}

TEST(Groebner, UnitIdeal) {
    auto g = groebner(ideal2({x() * y() - c(2, 1), x() * x()}), MonomialOrder::degrevlex(2));
    EXPECT_TRUE(g.is_unit());
}

TEST(Groebner, ReducedAndClosed) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 12; ++k) {
        auto f = random_polynomial(rng, 3, 3, 3), g = random_polynomial(rng, 3, 3, 3);
        if (f.is_zero() || g.is_zero())
            continue;
        for (auto order : {MonomialOrder::degrevlex(3), MonomialOrder::lex(3)}) {
            auto gb = groebner(Ideal(3, {f, g}), order);
            if (gb.is_unit())
                continue;
            auto lms = gb.leading_monomials();
            for (std::size_t a = 0; a < lms.size(); ++a)
                for (std::size_t b = 0; b < lms.size(); ++b)
                    if (a != b) {
                        EXPECT_FALSE(lms[a].divides(lms[b]));
                    }
            for (std::size_t a = 0; a < gb.basis.size(); ++a)
                for (std::size_t b = a + 1; b < gb.basis.size(); ++b)
                    EXPECT_TRUE(normal_form(detail::s_polynomial(gb.basis[a], gb.basis[b], order), gb).is_zero());
            auto h = random_polynomial(rng, 3, 2, 3);
            EXPECT_TRUE(normal_form(h * f + g, gb).is_zero());
            EXPECT_TRUE(ideal_contains(gb, f) && ideal_contains(gb, g));
        }
    }
}

TEST(NormalForm, Examples) {
    auto g = groebner(ideal2({x() * x() - c(2, 1), y()}), MonomialOrder::degrevlex(2));
    EXPECT_EQ(normal_form(x() * x(), g), c(2, 1));
    EXPECT_TRUE(normal_form(y() * x(), g).is_zero());
    EXPECT_EQ(normal_form(x().pow(3), g), x());
}

TEST(Staircase, Examples) {
    auto order = MonomialOrder::degrevlex(2);
    EXPECT_EQ(staircase_dim(groebner(ideal2({x(), y()}), order)), 1u);
    EXPECT_EQ(staircase_dim(groebner(ideal2({x() * x() - c(2, 1), y()}), order)), 2u);
    EXPECT_FALSE(staircase_dim(groebner(ideal2({x()}), order)));
}

TEST(KrullDim, Examples) {
    EXPECT_EQ(krull_dim(groebner(ideal2({x(), y()}), MonomialOrder::degrevlex(2))), 0u);
    EXPECT_EQ(krull_dim(groebner(ideal2({x() * y()}), MonomialOrder::degrevlex(2))), 1u);
    EXPECT_EQ(krull_dim(groebner(Ideal(3, {x(3)}), MonomialOrder::degrevlex(3))), 2u);
    expect_error(ErrorCode::UnitIdeal,
                 [] { krull_dim(groebner(ideal2({c(2, 1)}), MonomialOrder::degrevlex(2))); });
}

TEST(MinimalPolynomial, Examples) {
    auto i = ideal2({x() * x() - c(2, 1), y()});
    EXPECT_EQ(minimal_polynomial(i, 0), x() * x() - c(2, 1));
    EXPECT_EQ(minimal_polynomial(i, 1), y());
    EXPECT_EQ(minimal_polynomial(ideal2({x() - y(), y() * y() - c(2, 2)}), 0), x() * x() - c(2, 2));
    expect_error(ErrorCode::NotZeroDimensional, [] { minimal_polynomial(ideal2({x()}), 0); });
}

TEST(Radical, Examples) {
    auto order = MonomialOrder::degrevlex(2);
    auto r = groebner(zero_dim_radical(ideal2({x() * x(), y()})), order);
    EXPECT_EQ(r.basis, groebner(ideal2({x(), y()}), order).basis);
    auto same = ideal2({x() * x() - c(2, 1), y()});
    EXPECT_EQ(groebner(zero_dim_radical(same), order).basis, groebner(same, order).basis);
    auto messy = ideal2({(x() - c(2, 1)).pow(2) * (x() + c(2, 1)), y().pow(3)});
    EXPECT_EQ(staircase_dim(groebner(zero_dim_radical(messy), order)), 2u);
    expect_error(ErrorCode::UnitIdeal, [] { zero_dim_radical(ideal2({c(2, 1)})); });
    expect_error(ErrorCode::NotZeroDimensional, [] { zero_dim_radical(ideal2({x()})); });
}

TEST(AffinePointCount, Examples) {
    EXPECT_EQ(affine_point_count(ideal2({x() * x(), y()})), 1u);
    EXPECT_EQ(affine_point_count(ideal2({x() * x() - c(2, 1), y()})), 2u);
    EXPECT_EQ(affine_point_count(ideal2({x() * x() + c(2, 1), y()})), 2u);
    EXPECT_EQ(affine_point_count(ideal2({x() * x() - c(2, 1), y() * y() - c(2, 1)})), 4u);
}

TEST(AffinePointCount, InvariantUnderAffineChange) {
    auto i = ideal2({(x() - c(2, 1)) * (x() - c(2, 2)) * (x() - c(2, 3)), y() * y() + c(2, 1)});
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> e(-3, 3);
    std::size_t base = affine_point_count(i);
    EXPECT_EQ(base, 6u);
    for (int k = 0; k < 3; ++k) {
        RationalMatrix d = RationalMatrix::from_rows({{1, 0}, {0, 1}});
        do {
            d = RationalMatrix::from_rows({{e(rng), e(rng)}, {e(rng), e(rng)}});
        } while (rank(d) < 2);
        AffineChange t(d, {e(rng), e(rng)});
        EXPECT_EQ(affine_point_count(substitute_affine(i, t)), base);
    }
}

TEST(Saturate, Examples) {
    auto order = MonomialOrder::degrevlex(2);
    EXPECT_EQ(groebner(saturate(ideal2({x() * y()}), x()), order).basis, (std::vector<Polynomial>{y()}));
    EXPECT_EQ(groebner(saturate(ideal2({x()}), y()), order).basis, (std::vector<Polynomial>{x()}));
    // (x^2, xy) = (x) ∩ (x^2, y); removing x = 0 leaves nothing.
    EXPECT_TRUE(groebner(saturate(ideal2({x() * x(), x() * y()}), x()), order).is_unit());
    expect_error(ErrorCode::ZeroDivisor, [] { saturate(ideal2({x()}), Polynomial(2)); });
}

TEST(ProjectivePointCount, Examples) {
    EXPECT_EQ(projective_point_count(ideal2({x()})), 1u);
    EXPECT_EQ(projective_point_count(ideal2({x() * y()})), 2u);
    EXPECT_EQ(projective_point_count(ideal2({x() * x() + y() * y()})), 2u);
    EXPECT_EQ(projective_point_count(ideal2({x() * y() * (x() - y())})), 3u);
    EXPECT_EQ(projective_point_count(Ideal(3, {x(3), y(3)})), 1u);
    EXPECT_EQ(projective_point_count(Ideal(3, {x(3) * y(3), z()})), 2u);
    EXPECT_EQ(projective_point_count(Ideal(3, {x(3) * y(3), x(3) * z(), y(3) * z()})), 3u);
    expect_error(ErrorCode::NotHomogeneous, [] { projective_point_count(ideal2({x() + c(2, 1)})); });
    expect_error(ErrorCode::WrongHeight, [] { projective_point_count(ideal2({x(), y()})); });
    expect_error(ErrorCode::WrongHeight, [] { projective_point_count(Ideal(3, {x(3)})); });
}

TEST(ProjectivePointCount, SeedDeterminism) {
    auto i = Ideal(3, {x(3) * y(3), x(3) * z(), y(3) * z()});
    auto a = projective_point_count_detailed(i, {9, 32});
    auto b = projective_point_count_detailed(i, {9, 32});
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(a.attempts, b.attempts);
    EXPECT_EQ(a.change.matrix(), b.change.matrix());
}

TEST(RadicalMembership, Examples) {
    EXPECT_TRUE(radical_membership(x(), ideal2({x() * x()})));
    EXPECT_FALSE(radical_membership(y(), ideal2({x() * x()})));
    EXPECT_TRUE(radical_membership(x() + y(), ideal2({(x() + y()).pow(3), x() - y()})));
}
