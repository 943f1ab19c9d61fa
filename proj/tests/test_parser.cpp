#include "mieds/parser.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mieds;

TEST(Parser, PendulumField) {
    const VectorField f = parse_field("x1\n-x1 - 9.81*sin(x0)\n");
    ASSERT_EQ(f.dim(), 2u);
    const State v = eval(f, State{std::numbers::pi / 4, 0.5});
    EXPECT_DOUBLE_EQ(v[0], 0.5);
    EXPECT_DOUBLE_EQ(v[1], -0.5 - 9.81 * std::sin(std::numbers::pi / 4));
}

TEST(Parser, PrecedenceAndAssociativity) {
    const State x = {2.0, 3.0};
    EXPECT_DOUBLE_EQ(eval(parse_expression("1 + 2*x0^2"), x), 9.0);
    EXPECT_DOUBLE_EQ(eval(parse_expression("x1 - x0 - 1"), x), 0.0);
    EXPECT_DOUBLE_EQ(eval(parse_expression("x1 / x0 / 2"), x), 0.75);
    EXPECT_DOUBLE_EQ(eval(parse_expression("-x0^2"), x), -4.0);
    EXPECT_DOUBLE_EQ(eval(parse_expression("(x0 + x1)^2"), x), 25.0);
    EXPECT_DOUBLE_EQ(eval(parse_expression("-1*x0"), x), -2.0);
}

TEST(Parser, Functions) {
    const State x = {0.3};
    EXPECT_DOUBLE_EQ(eval(parse_expression("sin(x0)"), x), std::sin(0.3));
    EXPECT_DOUBLE_EQ(eval(parse_expression("cos(x0)"), x), std::cos(0.3));
    EXPECT_DOUBLE_EQ(eval(parse_expression("tan(x0)"), x), std::tan(0.3));
    EXPECT_DOUBLE_EQ(eval(parse_expression("-tanh(x0)"), x), -std::tanh(0.3));
    EXPECT_DOUBLE_EQ(eval(parse_expression("1.5e-1 * x0"), x), 0.045);
}

TEST(Parser, SkipsCommentsAndBlankLines) {
    const VectorField f = parse_field("# damped oscillator\n\nx1\n   \n-x0 - 0.1*x1\n");
    EXPECT_EQ(f.dim(), 2u);
}

namespace {

ParseError parse_error(std::string_view text) {
    try {
        parse_field(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for: " << text;
    return ParseError(0, 0, "");
}

} // namespace

TEST(ParserErrors, ReportLineAndColumn) {
    const auto e = parse_error("x0\n2 * * x1\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 5u);
    EXPECT_NE(std::string(e.what()).find("line 2, column 5"), std::string::npos);
}

TEST(ParserErrors, VariableBeyondDimension) {
    const auto e = parse_error("-x0 + x3\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 7u);
}

TEST(ParserErrors, UnbalancedParenthesis) {
    const auto e = parse_error("sin(x0\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 7u);
}

TEST(ParserErrors, UnknownFunction) {
    const auto e = parse_error("x0\nexp(x1)\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 1u);
}

TEST(ParserErrors, NonIntegerExponent) {
    EXPECT_THROW(parse_field("x0^1.5"), ParseError);
    EXPECT_THROW(parse_field("x0^-1"), ParseError);
}

TEST(ParserErrors, EmptyInput) {
    EXPECT_THROW(parse_field(""), ParseError);
    EXPECT_THROW(parse_field("# nothing here\n"), ParseError);
}

TEST(ParserErrors, TrailingGarbage) {
    const auto e = parse_error("x0 )");
    EXPECT_EQ(e.column(), 4u);
}
