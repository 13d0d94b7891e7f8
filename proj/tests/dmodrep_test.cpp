#include "derham/dmodrep.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace derham;
using namespace derham::testing;

namespace {

Label loc(int k, std::vector<int> alpha) {
    Label l{k};
    l.insert(l.end(), alpha.begin(), alpha.end());
    return l;
}

bool commute_on_slices(const ModuleFamily &f, int cap, int span) {
    auto lo = build_slice(f, {cap, span, std::nullopt, std::nullopt});
    auto hi = build_slice(f, {cap + 1, span, std::nullopt, std::nullopt});
    if (hi.basis != lo.target_basis)
        return false;
    for (std::size_t i = 0; i < f.ambient(); ++i)
        for (std::size_t j = 0; j < f.ambient(); ++j)
            if (!(hi.actions[i] * lo.actions[j] - hi.actions[j] * lo.actions[i]).is_zero_matrix())
                return false;
    return true;
}

} // namespace

TEST(LocalizedPartial, InverseOfX) {
    auto f = Polynomial::variable(1, 0);
    auto r = localized_partial(0, FractionElement(Polynomial::constant(1, 1), 1), f);
    EXPECT_EQ(r.exponent(), 2);
    EXPECT_EQ(r.numerator(), Polynomial::constant(1, -1));
}

TEST(LocalizedPartial, OtherVariableKills) {
    auto f = x();
    auto r = localized_partial(1, FractionElement(c(2, 1), 1), f);
    EXPECT_TRUE(r.numerator().is_zero());
    EXPECT_EQ(r.exponent(), 0);
}

TEST(LocalizedPartial, XOverXY) {
    // (xy * 1 - x * y) / (xy)^2 vanishes before any normalization.
    auto f = x() * y();
    auto v = FractionElement(x(), 1);
    EXPECT_EQ(v.normalized(f).exponent(), 1);
    EXPECT_TRUE(v.equals(FractionElement(x() * x() * y(), 2), f));
    auto r = localized_partial(0, v, f);
    EXPECT_TRUE(r.numerator().is_zero());
    EXPECT_EQ(r.exponent(), 0);
}

TEST(LocalizedPartial, QuotientRuleAgainstCrossMultiplication) {
    std::mt19937_64 rng(3);
    auto f = x() * x() - y();
    for (int s = 0; s < 30; ++s) {
        auto a = random_polynomial(rng, 2, 3, 3);
        int k = s % 3;
        auto r = localized_partial(s % 2, FractionElement(a, k), f);
        // f^{k+1} * r == f * d(a) - k * a * d(f), up to the denominator bookkeeping.
        auto expect = f * a.partial(s % 2) - a * f.partial(s % 2) * c(2, k);
        EXPECT_TRUE(r.equals(FractionElement(expect, k + 1), f));
    }
}

TEST(FractionElement, NormalizationIsCanonical) {
    std::mt19937_64 rng(5);
    auto f = x() * y() + c(2, 1);
    for (int s = 0; s < 30; ++s) {
        auto a = random_polynomial(rng, 2, 3, 3);
        int k = s % 4;
        auto once = FractionElement(a, k).normalized(f);
        auto twice = once.normalized(f);
        EXPECT_EQ(once.numerator(), twice.numerator());
        EXPECT_EQ(once.exponent(), twice.exponent());
        auto scaled = FractionElement(a * f.pow(2), k + 2).normalized(f);
        EXPECT_EQ(scaled.numerator(), once.numerator());
        EXPECT_EQ(scaled.exponent(), once.exponent());
        if (once.exponent() > 0) {
            EXPECT_FALSE(divide_exact(once.numerator(), f));
        }
    }
}

TEST(EModule, ActionsOnBasis) {
    auto a = e_module_actions(2, 0, {0, 0});
    EXPECT_TRUE(a.x_action.empty());
    EXPECT_EQ(a.d_action, (LinComb{{{1, 0}, Rational(-1)}}));
    auto b = e_module_actions(2, 0, {2, 0});
    EXPECT_EQ(b.x_action, (LinComb{{{1, 0}, Rational(1)}}));
    EXPECT_EQ(b.d_action, (LinComb{{{3, 0}, Rational(-3)}}));
}

TEST(EModule, CommutatorActsAsMinusOne) {
    InjectiveHullFamily e(3);
    for (const auto &r : e.basis(2, 2)) {
        for (std::size_t i = 0; i < 3; ++i) {
            LinComb xd, dx;
            for (const auto &[l, v] : e.partial(i, r))
                add_scaled(xd, e.multiply(i, l), v);
            for (const auto &[l, v] : e.multiply(i, r))
                add_scaled(dx, e.partial(i, l), v);
            LinComb diff = xd;
            add_scaled(diff, dx, -1);
            EXPECT_EQ(diff, (LinComb{{r, Rational(-1)}})) << e.describe(r);
        }
    }
}

TEST(EPolyModule, Actions) {
    EXPECT_TRUE(epoly_module_actions(2, 1, {4, 0}).empty());
    EXPECT_EQ(epoly_module_actions(2, 1, {1, 3}), (LinComb{{{1, 2}, Rational(3)}}));
    EXPECT_EQ(epoly_module_actions(2, 0, {0, 1}), (LinComb{{{1, 1}, Rational(-1)}}));
}

TEST(TranslatePoint, Conventions) {
    auto id = translate_point({Rational(0), Rational(0)});
    EXPECT_EQ(id.matrix(), RationalMatrix::identity(2));
    EXPECT_TRUE(id.is_homogeneous());
    auto t = translate_point({Rational(1), Rational(2)});
    EXPECT_EQ(t.matrix(), RationalMatrix::identity(2));
    EXPECT_EQ(t.shift(), (std::vector<Rational>{Rational(-1), Rational(-2)}));
    EXPECT_EQ(t.form(0), x() - c(2, 1));
    auto back = t.inverse();
    EXPECT_EQ(back.shift(), (std::vector<Rational>{Rational(1), Rational(2)}));
    std::mt19937_64 rng(9);
    for (int s = 0; s < 10; ++s) {
        auto p = random_polynomial(rng, 2, 4, 4);
        EXPECT_EQ(substitute_affine(substitute_affine(p, t), back), p);
    }
}

TEST(ComaximalPoints, Examples) {
    auto two = comaximal_points(Ideal(2, {x() * x() - c(2, 1), y()}));
    ASSERT_TRUE(two);
    EXPECT_EQ(*two, (std::vector<std::vector<Rational>>{{Rational(-1), Rational(0)}, {Rational(1), Rational(0)}}));
    EXPECT_FALSE(comaximal_points(Ideal(2, {x() * x() + c(2, 1), y()})));
    auto origin = comaximal_points(Ideal(2, {x(), y()}));
    ASSERT_TRUE(origin);
    EXPECT_EQ(*origin, (std::vector<std::vector<Rational>>{{Rational(0), Rational(0)}}));
    expect_error(ErrorCode::NotZeroDimensional, [] { comaximal_points(Ideal(2, {x()})); });
}

TEST(ComaximalPoints, NonReducedAndMixed) {
    auto p = comaximal_points(Ideal(2, {(x() - c(2, 1)).pow(2), y() * (y() - c(2, 1, 2))}));
    ASSERT_TRUE(p);
    EXPECT_EQ(p->size(), 2u);
    auto q = comaximal_points(Ideal(2, {x() * (x() * x() - c(2, 2)), y()}));
    EXPECT_FALSE(q);
}

TEST(BuildSlice, PolynomialStrand) {
    auto r = polynomial_ring(1);
    auto s = build_slice(*r, {0, 3, 0, 3});
    ASSERT_EQ(s.basis.size(), 4u);
    ASSERT_EQ(s.target_basis.size(), 3u);
    const auto &d = s.actions[0];
    for (std::size_t col = 0; col < 4; ++col)
        for (std::size_t row = 0; row < 3; ++row)
            EXPECT_EQ(d.at(row, col), row + 1 == col ? Rational(static_cast<long>(col)) : Rational(0));
}

TEST(BuildSlice, InjectiveHull) {
    InjectiveHullFamily e(1);
    auto s = build_slice(e, {0, 2, std::nullopt, std::nullopt});
    ASSERT_EQ(s.basis, (std::vector<Label>{{0}, {1}, {2}}));
    ASSERT_EQ(s.target_basis.size(), 4u);
    for (std::size_t col = 0; col < 3; ++col) {
        auto row = std::find(s.target_basis.begin(), s.target_basis.end(), Label{static_cast<int>(col) + 1}) -
                   s.target_basis.begin();
        EXPECT_EQ(s.actions[0].at(static_cast<std::size_t>(row), col), -static_cast<long>(col + 1));
    }
    EXPECT_EQ(s.actions[0].nonzeros(), 3u);
}

TEST(BuildSlice, LocalizationStrandCollapses) {
    LocalizationFamily rx(Polynomial::variable(1, 0));
    auto s = build_slice(rx, {3, 0, -1, -1});
    EXPECT_EQ(s.basis, (std::vector<Label>{loc(1, {0})}));
}

TEST(BuildSlice, GradedStrandsDoNotLeak) {
    LocalizationFamily rf(x() * y());
    std::vector<int> ones{1, 1};
    for (int d = -6; d <= 3; ++d) {
        auto s = build_slice(rf, {4, 2, d, d});
        for (const auto &l : s.basis)
            EXPECT_EQ(*rf.weight(l, ones), d);
        for (const auto &l : s.target_basis)
            EXPECT_EQ(*rf.weight(l, ones), d - 1);
    }
    expect_error(ErrorCode::NotHomogeneous,
                 [] { build_slice(LocalizationFamily(x() * x() - c(2, 1)), {2, 2, 0, 0}); });
}

TEST(BuildSlice, ActionsCommute) {
    std::vector<FamilyPtr> families{polynomial_ring(3), std::make_shared<InjectiveHullFamily>(3),
                                    std::make_shared<EPolyFamily>(3),
                                    std::make_shared<LocalizationFamily>(x(3) * y(3) - z(3)),
                                    std::make_shared<LocalizationFamily>(x() * x() - c(2, 1)),
                                    std::make_shared<LocalizationFamily>(x() * y() * (x() - y()))};
    for (const auto &f : families)
        for (int cap = 0; cap <= 4; ++cap)
            EXPECT_TRUE(commute_on_slices(*f, cap, 2)) << f->name() << " cap " << cap;
}

TEST(LocalizationFamily, NormalizeExpandsByDivision) {
    LocalizationFamily rf(x() * y());
    // y / (xy) stays, x^2 y^2 / (xy)^2 = 1.
    EXPECT_EQ(rf.normalize(y(), 1), (LinComb{{loc(1, {0, 1}), Rational(1)}}));
    EXPECT_EQ(rf.normalize(x() * x() * y() * y(), 2), (LinComb{{loc(0, {0, 0}), Rational(1)}}));
    expect_error(ErrorCode::ZeroDivisor, [] { LocalizationFamily(Polynomial(2)); });
}

TEST(CechInclusion, SingleGeneratorIsLocalization) {
    CechSpec spec(2, {x()});
    auto s = cech_inclusion_matrices(spec, {2, 1, std::nullopt, std::nullopt});
    ASSERT_EQ(s.differentials.size(), 1u);
    const auto &d = s.differentials[0];
    for (std::size_t col = 0; col < s.bases[0].size(); ++col) {
        const auto &src = s.bases[0][col];
        auto row = std::find(s.bases[1].begin(), s.bases[1].end(), CechLabel{{0}, src.label}) - s.bases[1].begin();
        EXPECT_EQ(d.at(static_cast<std::size_t>(row), col), 1);
        EXPECT_EQ(d.select_cols({col}).nonzeros(), 1u);
    }
}

TEST(CechInclusion, TwoGeneratorsSquareToZero) {
    for (auto gens : {std::vector<Polynomial>{x(), y()}, std::vector<Polynomial>{x() * x() - c(2, 1), y()},
                      std::vector<Polynomial>{x() * y(), x() - y(), y() + c(2, 2)}}) {
        CechSpec spec(2, gens);
        auto s = cech_inclusion_matrices(spec, {3, 2, std::nullopt, std::nullopt});
        for (std::size_t p = 0; p + 1 < s.differentials.size(); ++p)
            EXPECT_TRUE((s.differentials[p + 1] * s.differentials[p]).is_zero_matrix());
    }
}

TEST(CechInclusion, ExtendsByComplementaryGenerator) {
    CechSpec spec(2, {x(), y()});
    // 1/x in R_x maps to y/(xy) in R_xy.
    EXPECT_EQ(spec.extend({0}, 1, loc(1, {0, 0})), (LinComb{{loc(1, {0, 1}), Rational(1)}}));
    EXPECT_EQ(CechSpec::sign({0}, 1), -1);
    EXPECT_EQ(CechSpec::sign({1}, 0), 1);
}
