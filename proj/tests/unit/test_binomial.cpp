#include <gtest/gtest.h>

#include <cmath>

#include "eagleeye/binomial.hpp"
#include "eagleeye/error.hpp"
#include "oracles/binomial_oracle.hpp"

using namespace eagleeye;

TEST(BinomialTail, SmallExamples) {
    EXPECT_DOUBLE_EQ(binomial_tail_pvalue(0, 10, 0.5), 1.0);
    EXPECT_NEAR(binomial_tail_pvalue(10, 10, 0.5), 1.0 / 1024.0, 1e-16);
    EXPECT_NEAR(binomial_tail_pvalue(4, 5, 0.5), 0.1875, 1e-15);
    EXPECT_EQ(log_binomial_tail(0, 7, 0.3), 0.0);
}

TEST(BinomialTail, MatchesExactFraction) {
    const double got = binomial_tail_pvalue(30, 40, 0.5);
    const double want = static_cast<double>(oracle::fair_tail_exact(30, 40));
    EXPECT_NEAR(got / want, 1.0, 1e-12);
}

TEST(BinomialTail, LogTailAgainstMultiprecision) {
    struct Case { std::int64_t b, k; double p; };
    for (const Case c : {Case{30, 40, 0.5}, Case{500, 500, 0.5}, Case{400, 700, 0.4862},
                         Case{90, 100, 0.1}, Case{1, 1, 0.9}, Case{250, 300, 0.5137}}) {
        const double got = log_binomial_tail(c.b, c.k, c.p);
        const double want = static_cast<double>(boost::multiprecision::log(oracle::tail(c.b, c.k, c.p)));
        EXPECT_NEAR(got, want, 1e-11 * std::abs(want) + 1e-13) << c.b << "/" << c.k;
    }
}

TEST(BinomialTail, NonIncreasingInB) {
    for (const double p : {0.2, 0.5, 0.77}) {
        double prev = 0.0;
        for (std::int64_t b = 0; b <= 200; ++b) {
            const double v = log_binomial_tail(b, 200, p);
            EXPECT_LE(v, prev);
            prev = v;
        }
    }
}

TEST(BinomialTail, DomainErrors) {
    EXPECT_THROW(log_binomial_tail(-1, 5, 0.5), Error);
    EXPECT_THROW(log_binomial_tail(6, 5, 0.5), Error);
    EXPECT_THROW(log_binomial_tail(1, 0, 0.5), Error);
    EXPECT_THROW(log_binomial_tail(1, 5, 0.0), Error);
    EXPECT_THROW(log_binomial_tail(1, 5, 1.0), Error);
}

TEST(UpsilonTable, AgreesWithDirectTail) {
    const UpsilonTable table(120, 0.47);
    for (std::size_t k = 1; k <= 120; k += 7) {
        for (std::size_t b = 0; b <= k; ++b) {
            EXPECT_NEAR(table(b, k), -log_binomial_tail(b, k, 0.47), 1e-10 * (1 + table(b, k)));
        }
    }
    const auto d = table.distinct_values();
    EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
    EXPECT_EQ(std::adjacent_find(d.begin(), d.end()), d.end());
    EXPECT_EQ(table.row(5).size(), 6u);
}

TEST(UpsilonProfile, Examples) {
    const std::vector<std::uint8_t> ones(10, 1);
    auto r = upsilon_profile(ones, 0.5);
    EXPECT_NEAR(r.upsilon, 10 * std::log(2.0), 1e-12);
    EXPECT_EQ(r.k_star, 10u);

    std::vector<std::uint8_t> alt(20);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0;
    r = upsilon_profile(alt, 0.5);
    EXPECT_NEAR(r.upsilon, std::log(2.0), 1e-12);
    EXPECT_EQ(r.k_star, 1u);

    std::vector<std::uint8_t> head(20, 0);
    head[0] = head[1] = head[2] = 1;
    r = upsilon_profile(head, 0.5);
    EXPECT_NEAR(r.upsilon, std::log(8.0), 1e-12);
    EXPECT_EQ(r.k_star, 3u);
    EXPECT_EQ(r.profile.size(), 20u);
}

TEST(UpsilonProfile, PrefixConsistency) {
    std::vector<std::uint8_t> b{1, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 1};
    const UpsilonTable table(b.size(), 0.5);
    const auto full = upsilon_profile(b, table);
    for (std::size_t len = 1; len <= b.size(); ++len) {
        const auto part = upsilon_profile(std::span(b).first(len), table);
        for (std::size_t k = 0; k < len; ++k) EXPECT_EQ(part.profile[k], full.profile[k]);
    }
    // Table and direct paths agree.
    const auto direct = upsilon_profile(b, 0.5);
    EXPECT_NEAR(direct.upsilon, full.upsilon, 1e-12);
    EXPECT_EQ(direct.k_star, full.k_star);
}
