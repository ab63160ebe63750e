#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eagleeye/error.hpp"
#include "eagleeye/estimators.hpp"

using namespace eagleeye;

namespace {

// Plain reimplementation with long double arithmetic.
long double ratio_of(long double no, long double po, long double nt, long double pt) {
    return (no - po) / (nt - pt);
}

}  // namespace

TEST(Estimators, BenchmarkRows) {
    EXPECT_NEAR(purity_estimate(62, 11, 50000, 2058, 50000, 1086), 0.826, 0.005);
    EXPECT_NEAR(purity_estimate(704, 5, 50000, 1086, 50000, 2058), 0.993, 0.005);
    const long double b = 211.0L * ratio_of(50000, 2058, 50000, 1086);
    EXPECT_NEAR(s_over_sqrt_b_estimate(1072, 211, 50000, 2058, 50000, 1086),
                static_cast<double>((1072 - b) / std::sqrt(b)), 1e-12);
    EXPECT_NEAR(s_over_sqrt_b_estimate(1072, 211, 50000, 2058, 50000, 1086), 60.2, 0.1);
}

TEST(Estimators, ExactCases) {
    EXPECT_EQ(purity_estimate(40, 0, 100, 10, 200, 5), 1.0);
    EXPECT_DOUBLE_EQ(s_over_sqrt_b_estimate(100, 25, 1000, 0, 1000, 0), 15.0);
    EXPECT_DOUBLE_EQ(s_over_sqrt_b_estimate(50, 50, 1000, 0, 1000, 0), 0.0);
    EXPECT_DOUBLE_EQ(background_ratio(110, 10, 60, 10), 2.0);
}

TEST(Estimators, MatchIndependentFormula) {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::size_t> n(1000, 100000), small(1, 500);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t no = n(gen), nt = n(gen);
        const std::size_t po = small(gen), pt = small(gen);
        const std::size_t anom = small(gen), inj = small(gen);
        const long double r = ratio_of(no, po, nt, pt);
        const long double pur = (anom - inj * r) / anom;
        const long double sb = (anom - inj * r) / std::sqrt(inj * r);
        EXPECT_NEAR(purity_estimate(anom, inj, no, po, nt, pt), static_cast<double>(pur), 1e-12);
        EXPECT_NEAR(s_over_sqrt_b_estimate(anom, inj, no, po, nt, pt), static_cast<double>(sb),
                    1e-10 * (1 + std::abs(static_cast<double>(sb))));
    }
}

TEST(Estimators, Errors) {
    auto code = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    EXPECT_EQ(code([] { background_ratio(10, 1, 5, 5); }), ErrorCode::DivisionByZero);
    EXPECT_EQ(code([] { purity_estimate(0, 1, 10, 1, 10, 1); }), ErrorCode::ZeroAnomaly);
    EXPECT_EQ(code([] { s_over_sqrt_b_estimate(5, 0, 10, 1, 10, 1); }), ErrorCode::ZeroBackground);
}

TEST(Estimators, FlagsForUndefinedValues) {
    auto e = estimate({10, 0, 100, 5, 100, 5});
    ASSERT_TRUE(e.purity.has_value());
    EXPECT_EQ(*e.purity, 1.0);
    EXPECT_FALSE(e.s_over_sqrt_b.has_value());
    EXPECT_EQ(e.flags, std::vector<std::string>{std::string(kFlagZeroBackground)});

    e = estimate({10, 30, 100, 5, 100, 5});
    ASSERT_TRUE(e.purity.has_value());
    EXPECT_LT(*e.purity, 0.0);
    EXPECT_NE(std::find(e.flags.begin(), e.flags.end(), std::string(kFlagNegativePurity)), e.flags.end());

    e = estimate({10, 3, 100, 5, 20, 20});
    EXPECT_FALSE(e.purity.has_value());
    EXPECT_FALSE(e.s_over_sqrt_b.has_value());
    EXPECT_NE(std::find(e.flags.begin(), e.flags.end(), std::string(kFlagNoReferenceBackground)),
              e.flags.end());
}
