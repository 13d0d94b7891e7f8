#include "derham/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace derham;

namespace {

RationalMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols, int density_pct) {
    std::uniform_int_distribution<int> pct(0, 99), val(-9, 9), den(1, 4);
    RationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (pct(rng) < density_pct)
                m.set(r, c, make_rational(val(rng), den(rng)));
    return m;
}

} // namespace

TEST(Rank, Identity) { EXPECT_EQ(rank(RationalMatrix::identity(3)), 3u); }

TEST(Rank, ZeroMatrix) { EXPECT_EQ(rank(RationalMatrix(5, 7)), 0u); }

TEST(Rank, ProportionalRows) {
    auto m = RationalMatrix::from_rows({{1, 2, 3}, {2, 4, 6}});
    EXPECT_EQ(rank(m), 1u);
    EXPECT_EQ(rank_bareiss(m), 1u);
}

TEST(Rank, NoStoredZeros) {
    RationalMatrix m(2, 2);
    m.set(0, 0, 3);
    m.add_to(0, 0, -3);
    EXPECT_EQ(m.nonzeros(), 0u);
}

TEST(Rank, AgreesWithBareissAndTranspose) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t rows = 1 + rng() % 9, cols = 1 + rng() % 9;
        auto m = random_matrix(rng, rows, cols, 10 + static_cast<int>(rng() % 60));
        // Force some dependencies.
        if (rows > 2) {
            for (std::size_t c = 0; c < cols; ++c)
                m.set(rows - 1, c, m.at(0, c) * make_rational(3, 2) - m.at(1, c));
        }
        auto r = rank(m);
        EXPECT_EQ(r, rank_bareiss(m));
        EXPECT_EQ(r, rank(m.transpose()));
    }
}

TEST(Rank, InvariantUnderPermutationAndScaling) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = random_matrix(rng, 6, 7, 40);
        std::vector<std::size_t> rp{5, 3, 1, 0, 2, 4}, cp{6, 0, 5, 1, 4, 2, 3};
        auto p = m.select_rows(rp).select_cols(cp);
        EXPECT_EQ(rank(m), rank(p));
        RationalMatrix s = m;
        for (std::size_t c = 0; c < s.cols(); ++c)
            s.set(2, c, s.at(2, c) * make_rational(-7, 5));
        EXPECT_EQ(rank(m), rank(s));
    }
}

TEST(Rank, DropRows) {
    auto m = RationalMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
    std::vector<bool> drop{true, false, false};
    EXPECT_EQ(rank(m, &drop), 2u);
    drop = {true, true, false};
    EXPECT_EQ(rank(m, &drop), 1u);
}

TEST(Nullspace, SpansKernel) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = random_matrix(rng, 4, 7, 50);
        auto k = nullspace(m);
        EXPECT_EQ(k.cols() + rank(m), m.cols());
        EXPECT_TRUE((m * k).is_zero_matrix());
        EXPECT_EQ(rank(k), k.cols());
    }
}

TEST(Inverse, RoundTrip) {
    auto m = RationalMatrix::from_rows({{1, 1}, {0, 1}});
    auto inv = inverse(m);
    ASSERT_TRUE(inv);
    EXPECT_EQ(m * *inv, RationalMatrix::identity(2));
    EXPECT_FALSE(inverse(RationalMatrix::from_rows({{1, 2}, {2, 4}})));
}

TEST(Homology, ZeroDifferential) {
    ChainComplex c({1, 1}, {RationalMatrix(1, 1)});
    EXPECT_EQ(homology_dims(c), (std::vector<std::size_t>{1, 1}));
}

TEST(Homology, Isomorphism) {
    ChainComplex c({1, 1}, {RationalMatrix::identity(1)});
    EXPECT_EQ(homology_dims(c), (std::vector<std::size_t>{0, 0}));
}

TEST(Homology, ZeroOperatorsKoszul) {
    ChainComplex c({1, 2, 1}, {RationalMatrix(1, 2), RationalMatrix(2, 1)});
    EXPECT_EQ(homology_dims(c), (std::vector<std::size_t>{1, 2, 1}));
}

TEST(Homology, CompositeNotZero) {
    ChainComplex c({1, 1, 1}, {RationalMatrix::identity(1), RationalMatrix::identity(1)});
    try {
        homology_dims(c);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::CompositeNotZero);
    }
}

TEST(Homology, EulerCharacteristicOnRandomComplexes) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        // d1 * d2 = 0 by taking d2 from the kernel of d1.
        auto d1 = random_matrix(rng, 3, 6, 50);
        auto k = nullspace(d1);
        RationalMatrix d2 = k.cols() == 0 ? RationalMatrix(6, 1) : k;
        ChainComplex c({3, 6, d2.cols()}, {d1, d2});
        auto h = homology_dims(c);
        long long lhs = 0, rhs = 0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            lhs += (i % 2 ? -1 : 1) * static_cast<long long>(h[i]);
            rhs += (i % 2 ? -1 : 1) * static_cast<long long>(c.dim(i));
        }
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(ImageHomology, TruncatedLineRemovesBoundaryArtifact) {
    // d/dx on polynomials of degree <= 2 (inner) and <= 3 (outer).
    RationalMatrix din(3, 3);
    din.set(0, 1, 1);
    din.set(1, 2, 2);
    ChainComplex in({3, 3}, {din});
    EXPECT_EQ(homology_dims(in), (std::vector<std::size_t>{1, 1}));
    RationalMatrix dout(4, 4);
    dout.set(0, 1, 1);
    dout.set(1, 2, 2);
    dout.set(2, 3, 3);
    ChainComplex out({4, 4}, {dout});
    auto h = image_homology_dims(in, out, {{0, 1, 2}, {0, 1, 2}});
    EXPECT_EQ(h, (std::vector<std::size_t>{0, 1}));
}
