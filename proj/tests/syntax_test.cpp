#include "derham/sample.hpp"
#include "derham/syntax.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace derham;
using namespace derham::testing;

namespace {

const std::vector<std::string> xy{"x", "y"};

void expect_parse_error(ErrorCode code, const std::string &src, std::size_t position) {
    try {
        parse_polynomial(src, xy);
        ADD_FAILURE() << "parsed '" << src << "'";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.code(), code) << src;
        EXPECT_EQ(e.position(), position) << src;
    }
}

} // namespace

TEST(Parse, Examples) {
    EXPECT_EQ(parse_polynomial("x^2 - 1", xy), x() * x() - c(2, 1));
    EXPECT_EQ(parse_polynomial("3/2*x*y + y^3", xy), c(2, 3, 2) * x() * y() + y().pow(3));
}

TEST(Parse, UnaryMinusAndParentheses) {
    EXPECT_EQ(parse_polynomial("-x", xy), -x());
    EXPECT_EQ(parse_polynomial("-(x - y)^2", xy), -((x() - y()) * (x() - y())));
    EXPECT_EQ(parse_polynomial("x*-y", xy), -(x() * y()));
    EXPECT_EQ(parse_polynomial("2 - -3", xy), c(2, 5));
    EXPECT_EQ(parse_polynomial("((x))^0", xy), c(2, 1));
    EXPECT_EQ(parse_polynomial(" 4/6 ", xy), c(2, 2, 3));
}

TEST(Parse, Errors) {
    expect_parse_error(ErrorCode::SyntaxError, "x y", 2);
    expect_parse_error(ErrorCode::SyntaxError, "2x", 1);
    expect_parse_error(ErrorCode::UnknownVariable, "x + z", 4);
    expect_parse_error(ErrorCode::SyntaxError, "x^-1", 2);
    expect_parse_error(ErrorCode::SyntaxError, "1/0", 3);
    expect_parse_error(ErrorCode::SyntaxError, "(x + 1", 6);
    expect_parse_error(ErrorCode::SyntaxError, "", 0);
    expect_parse_error(ErrorCode::SyntaxError, "x^1001", 6);
    expect_parse_error(ErrorCode::SyntaxError, "x + ", 4);
}

TEST(Variables, Parsing) {
    EXPECT_EQ(parse_variables("x,y"), xy);
    EXPECT_EQ(parse_variables(" a1 , b_2 "), (std::vector<std::string>{"a1", "b_2"}));
    expect_error(ErrorCode::SyntaxError, [] { parse_variables("x,x"); });
    expect_error(ErrorCode::SyntaxError, [] { parse_variables("1x"); });
    expect_error(ErrorCode::SyntaxError, [] { parse_variables("x,"); });
    EXPECT_EQ(default_variables(3), (std::vector<std::string>{"x", "y", "z"}));
    EXPECT_EQ(default_variables(5).back(), "x5");
}

TEST(Format, Canonical) {
    EXPECT_EQ(format_polynomial(c(2, 3, 2) * x() * y() + y().pow(3), xy), "y^3 + 3/2*x*y");
    EXPECT_EQ(format_polynomial(x() * x() - c(2, 1), xy), "x^2 - 1");
    EXPECT_EQ(format_polynomial(-x(), xy), "-x");
    EXPECT_EQ(format_polynomial(Polynomial(2), xy), "0");
    expect_error(ErrorCode::AmbientMismatch, [] { format_polynomial(x(), {"x"}); });
}

TEST(Format, RoundTrip) {
    std::mt19937_64 rng(29);
    const std::vector<std::string> xyz{"x", "y", "z"};
    for (int s = 0; s < 80; ++s) {
        auto p = random_polynomial(rng, 3, 5, 6);
        auto text = format_polynomial(p, xyz);
        auto q = parse_polynomial(text, xyz);
        EXPECT_EQ(q, p) << text;
        EXPECT_EQ(format_polynomial(q, xyz), text);
    }
}
