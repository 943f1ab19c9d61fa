#include "mieds/expr.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mieds;

namespace {

double central(const std::function<double(double)>& g, double x, double h = 1e-5) {
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

} // namespace

TEST(Eval, PendulumAtInitialState) {
    const VectorField f({var(1), -var(1) - 9.81 * sin(var(0))});
    const State v = eval(f, State{std::numbers::pi / 4, 0.0});
    EXPECT_EQ(v[0], 0.0);
    EXPECT_NEAR(v[1], -6.936717523440031, 1e-14);
}

TEST(Eval, TanhEquilibrium) {
    const VectorField f({-tanh(var(0))});
    EXPECT_EQ(eval(f, State{0.0})[0], 0.0);
}

TEST(Eval, DivisionByZeroIsDomainError) {
    EXPECT_THROW(eval(1.0 / var(0), State{0.0}), DomainError);
    EXPECT_THROW(eval(1.0 / var(0), State{1e-13}), DomainError);
    EXPECT_NO_THROW(eval(1.0 / var(0), State{1e-6}));
}

TEST(Eval, TanPoleIsDomainError) {
    EXPECT_THROW(eval(tan(var(0)), State{std::numbers::pi / 2}), DomainError);
    EXPECT_NO_THROW(eval(tan(var(0)), State{1.0}));
}

TEST(Expr, PowerExponentMustBeNonNegative) { EXPECT_THROW(pow(var(0), -1), ConfigError); }

TEST(Expr, ArityCountsVariables) {
    EXPECT_EQ((var(0) * sin(var(3))).arity(), 4u);
    EXPECT_EQ(constant(1.0).arity(), 0u);
}

TEST(VectorField, RejectsOutOfRangeVariable) { EXPECT_THROW(VectorField({var(0), var(2)}), ConfigError); }

TEST(Jet, SinMaclaurinCubic) {
    const auto p = eval_jet(sin(var(0)), State{0.0}, 3);
    const std::vector<double> expected = {0.0, 1.0, 0.0, -1.0 / 6.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(p.coefficients()[i], expected[i], 1e-15);
}

TEST(Jet, TanMaclaurinCubic) {
    const auto p = eval_jet(tan(var(0)), State{0.0}, 3);
    const std::vector<double> expected = {0.0, 1.0, 0.0, 1.0 / 3.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(p.coefficients()[i], expected[i], 1e-15);
}

TEST(Jet, MaclaurinSeriesToDegreeNine) {
    const std::vector<double> sin_c = {0, 1, 0, -1.0 / 6, 0, 1.0 / 120, 0, -1.0 / 5040, 0, 1.0 / 362880};
    const std::vector<double> tan_c = {0, 1, 0, 1.0 / 3, 0, 2.0 / 15, 0, 17.0 / 315, 0, 62.0 / 2835};
    const std::vector<double> tanh_c = {0, 1, 0, -1.0 / 3, 0, 2.0 / 15, 0, -17.0 / 315, 0, 62.0 / 2835};
    const auto s = eval_jet(sin(var(0)), State{0.0}, 9);
    const auto t = eval_jet(tan(var(0)), State{0.0}, 9);
    const auto h = eval_jet(tanh(var(0)), State{0.0}, 9);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_NEAR(s.coefficients()[i], sin_c[i], 1e-12);
        EXPECT_NEAR(t.coefficients()[i], tan_c[i], 1e-12);
        EXPECT_NEAR(h.coefficients()[i], tanh_c[i], 1e-12);
    }
}

TEST(Jet, ProductExpansion) {
    const double a = 1.7, b = -0.4;
    const auto p = eval_jet(var(0) * var(1), State{a, b}, 2);
    EXPECT_DOUBLE_EQ(p.coefficient({0, 0}), a * b);
    EXPECT_DOUBLE_EQ(p.coefficient({1, 0}), b);
    EXPECT_DOUBLE_EQ(p.coefficient({0, 1}), a);
    EXPECT_DOUBLE_EQ(p.coefficient({1, 1}), 1.0);
    EXPECT_EQ(p.coefficient({2, 0}), 0.0);
    EXPECT_EQ(p.coefficient({0, 2}), 0.0);
}

TEST(Jet, SinAtQuarterPiAgainstFiniteDifferences) {
    const double c = std::numbers::pi / 4;
    const auto p = eval_jet(sin(var(0)), State{c}, 2);
    auto f = [](double x) { return std::sin(x); };
    auto df = [&](double x) { return central(f, x); };
    EXPECT_NEAR(p.coefficients()[0], std::sin(c), 1e-15);
    EXPECT_NEAR(p.coefficients()[1], central(f, c), 1e-9);
    EXPECT_NEAR(p.coefficients()[2], central(df, c) / 2.0, 1e-5);
    EXPECT_NEAR(p.coefficients()[2], -std::sin(c) / 2.0, 1e-15);
}

TEST(Jet, QuotientMatchesSeries) {
    // 1/(1 - x) = 1 + x + x² + ...
    const auto p = eval_jet(1.0 / (1.0 - var(0)), State{0.0}, 6);
    for (std::size_t i = 0; i <= 6; ++i) EXPECT_NEAR(p.coefficients()[i], 1.0, 1e-14);
}

TEST(Jet, PowerMatchesBinomial) {
    const auto p = eval_jet(pow(var(0), 5), State{2.0}, 5);
    for (int j = 0; j <= 5; ++j)
        EXPECT_DOUBLE_EQ(p.coefficients()[static_cast<std::size_t>(j)],
                         static_cast<double>(binomial(5, static_cast<std::size_t>(j))) * std::pow(2.0, 5 - j));
}

TEST(Jet, SingularCenterIsDomainError) {
    EXPECT_THROW(eval_jet(1.0 / var(0), State{0.0}, 2), DomainError);
    EXPECT_THROW(eval_jet(tan(var(0)), State{std::numbers::pi / 2}, 2), DomainError);
}

TEST(Jet, ConstantTermEqualsEvalOnRandomExpressions) {
    oracle::Sampler s(11);
    const std::vector<Expr> exprs = {
        sin(var(0)) * cos(var(1)) + pow(var(0), 3),
        tanh(var(0) - 2.0 * var(1)) / (2.0 + cos(var(0))),
        -tan(0.3 * var(1)) * var(0) - var(1),
    };
    for (const auto& e : exprs)
        for (int trial = 0; trial < 20; ++trial) {
            const State c = s.vector(2, -1.5, 1.5);
            const int k = s.integer(0, 6);
            const auto p = eval_jet(e, c, k);
            EXPECT_NEAR(p.constant_term(), eval(e, c), 1e-14 * std::max(1.0, std::abs(eval(e, c))));
        }
}

TEST(Jet, HigherDegreesTruncateToLower) {
    const Expr e = tanh(var(0) * var(1)) + sin(var(0)) / (3.0 + var(1));
    const State c = {0.2, 0.9};
    const auto full = eval_jet(e, c, 7);
    for (int j = 0; j <= 7; ++j) EXPECT_EQ(full.truncated(j), eval_jet(e, c, j));
}

TEST(Jet, NoCoefficientsBeyondDegree) {
    const auto p = eval_jet(pow(var(0), 6), State{1.0}, 3);
    EXPECT_EQ(p.degree(), 3);
    EXPECT_EQ(p.coefficients().size(), 4u);
    EXPECT_EQ(p.coefficient({5}), 0.0);
}
