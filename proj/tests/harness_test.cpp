#include "derham/harness.hpp"
#include "derham/report.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace derham;
using namespace derham::testing;

namespace {

using Dims = std::vector<std::size_t>;

Ideal ideal2(std::vector<Polynomial> g) { return Ideal(2, std::move(g)); }

Dims dims_of(const VerificationReport &r, const std::string &label) {
    auto *c = r.find(label);
    return c ? c->result.cohomological_dims : Dims{};
}

bool has_float(const Json &j) {
    if (j.is_number_float())
        return true;
    if (j.is_structured())
        for (const auto &v : j)
            if (has_float(v))
                return true;
    return false;
}

} // namespace

TEST(Theorem1, DoublePoint) {
    auto r = verify_theorem1(ideal2({x() * x(), y()}));
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(dims_of(r, "path_b"), (Dims{0, 0, 1}));
    EXPECT_EQ(dims_of(r, "path_a"), (Dims{0, 0, 1}));
}

TEST(Theorem1, TwoRationalPoints) {
    auto r = verify_theorem1(ideal2({x() * x() - c(2, 1), y()}));
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(dims_of(r, "path_b"), (Dims{0, 0, 2}));
    EXPECT_EQ(dims_of(r, "path_a"), dims_of(r, "path_b"));
}

TEST(Theorem1, ConjugatePointsUsePathBOnly) {
    auto r = verify_theorem1(ideal2({x() * x() + c(2, 1), y()}));
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(dims_of(r, "path_b"), (Dims{0, 0, 2}));
    EXPECT_EQ(r.find("path_a"), nullptr);
}

TEST(Theorem1, Gates) {
    expect_error(ErrorCode::UnitIdeal, [] { verify_theorem1(ideal2({x(), x() - c(2, 1)})); });
    expect_error(ErrorCode::NotZeroDimensional, [] { verify_theorem1(ideal2({x() * y()})); });
}

TEST(Theorem1, InconclusiveIsNotFail) {
    HarnessOptions o;
    o.stabilization.caps = {4};
    auto r = verify_theorem1(ideal2({x(), y()}), o);
    EXPECT_EQ(r.verdict, Verdict::Inconclusive);
    EXPECT_TRUE(r.failures.empty());
}

TEST(Theorem2, Line) {
    auto r = verify_theorem2(ideal2({x()}));
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(dims_of(r, "path_b"), (Dims{0, 1, 0}));
}

TEST(Theorem2, TwoLines) {
    auto r = verify_theorem2(ideal2({x() * y()}));
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(dims_of(r, "path_b"), (Dims{0, 2, 1}));
}

TEST(Theorem2, ConjugateLines) {
    auto r = verify_theorem2(ideal2({x() * x() + y() * y()}));
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_EQ(dims_of(r, "path_b"), (Dims{0, 2, 1}));
}

TEST(Theorem2, Gates) {
    expect_error(ErrorCode::NotHomogeneous, [] { verify_theorem2(ideal2({x() - c(2, 1)})); });
    expect_error(ErrorCode::WrongHeight, [] { verify_theorem2(ideal2({x(), y()})); });
    expect_error(ErrorCode::UnitIdeal, [] { verify_theorem2(ideal2({c(2, 3)})); });
    expect_error(ErrorCode::InvalidArgument, [] { verify_theorem2(Ideal(1, {Polynomial::variable(1, 0)})); });
}

TEST(BuildingBlocks, TwoVariables) {
    auto r = verify_building_blocks(2);
    EXPECT_EQ(r.verdict, Verdict::Pass) << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_EQ(r.find("E")->result.homological_dims, (Dims{1, 0, 0}));
    EXPECT_EQ(r.find("R")->result.homological_dims, (Dims{0, 0, 1}));
    EXPECT_EQ(r.find("HP")->result.homological_dims, (Dims{0, 1, 0}));
    EXPECT_EQ(r.find("HP_cech")->result.homological_dims, (Dims{0, 1, 0}));
    EXPECT_EQ(r.find("H1f[x*y]")->result.homological_dims, (Dims{1, 2, 0}));
    EXPECT_EQ(r.find("Rf[x*y]")->result.homological_dims, (Dims{1, 2, 1}));
    for (const auto &f : {"Rf[x]", "Rf[x*y]", "Rf[x^2 - y^2]"})
        EXPECT_EQ(r.find(f)->result.homological_dims.back(), 1u) << f;
    for (const auto &f : {"H1f[x]", "H1f[x*y]", "H1f[x^2 - y^2]"})
        EXPECT_EQ(r.find(f)->result.homological_dims.back(), 0u) << f;
}

TEST(BuildingBlocks, OneAndThreeVariables) {
    EXPECT_EQ(verify_building_blocks(1).verdict, Verdict::Pass);
    auto r = verify_building_blocks(3, {}, std::vector<Polynomial>{x(3) * y(3)});
    EXPECT_EQ(r.verdict, Verdict::Pass) << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_EQ(r.find("HP")->result.homological_dims, (Dims{0, 1, 0, 0}));
}

TEST(VanishingBound, Examples) {
    DeRhamResult e;
    e.n = 2;
    e.stabilized = true;
    e.cohomological_dims = {0, 0, 1};
    EXPECT_TRUE(check_theorem3_bound(e, 0));
    DeRhamResult r = e;
    r.cohomological_dims = {1, 0, 0};
    EXPECT_TRUE(check_theorem3_bound(r, 2));
    EXPECT_FALSE(check_theorem3_bound(r, 0));
    DeRhamResult t;
    t.n = 3;
    t.stabilized = true;
    t.cohomological_dims = {0, 0, 2, 1};
    EXPECT_TRUE(check_theorem3_bound(t, 1));
    t.cohomological_dims = {0, 1, 2, 1};
    EXPECT_FALSE(check_theorem3_bound(t, 1));
}

TEST(Report, SchemaAndDeterminism) {
    auto a = to_json(verify_theorem1(ideal2({x() * x() - c(2, 1), y()})));
    auto b = to_json(verify_theorem1(ideal2({x() * x() - c(2, 1), y()})));
    EXPECT_EQ(a.dump(), b.dump());
    std::vector<std::string> keys;
    for (const auto &[k, v] : a.items())
        keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"theorem", "input", "expected", "computed", "windows", "seed",
                                              "verdict", "failures"}));
    EXPECT_TRUE(a["computed"].contains("path_a"));
    EXPECT_TRUE(a["computed"].contains("path_b"));
    EXPECT_EQ(a["verdict"], "pass");
    EXPECT_FALSE(has_float(a));
    EXPECT_FALSE(a.contains("wall_time_ms"));
    EXPECT_EQ(to_json(verify_theorem1(ideal2({x(), y()})), 12)["wall_time_ms"], 12);
}

TEST(Report, RationalFactsAreStrings) {
    auto r = to_json(verify_theorem1(ideal2({c(2, 2) * x() - c(2, 1), y()})));
    EXPECT_EQ(r["expected"]["facts"]["rational_points"], "(1/2,0)");
}
