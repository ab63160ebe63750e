#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "eagleeye/error.hpp"
#include "eagleeye/threshold.hpp"
#include "support.hpp"

using namespace eagleeye;

namespace {

// P[max_K table(S_K, K) >= t] by enumerating every sequence.
double enumerate_crossing(const UpsilonTable& table, double t) {
    const std::size_t k = table.k_max();
    const double p = table.p_success();
    double total = 0.0;
    for (std::uint64_t seq = 0; seq < (1ULL << k); ++seq) {
        std::size_t s = 0;
        bool hit = false;
        double weight = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            const bool one = (seq >> i) & 1;
            s += one;
            weight *= one ? p : 1.0 - p;
            if (table(s, i + 1) >= t) hit = true;
        }
        if (hit) total += weight;
    }
    return total;
}

}  // namespace

TEST(CrossingProbability, MatchesEnumeration) {
    for (const double p : {0.5, 0.37}) {
        const UpsilonTable table(14, p);
        for (const double t : {0.5, 1.5, 3.0, 4.2, 6.0, 9.0}) {
            const double want = enumerate_crossing(table, t);
            EXPECT_NEAR(crossing_probability(table, t), want, 1e-13 + 1e-11 * want) << p << " " << t;
        }
    }
}

TEST(NullThreshold, SmallestQualifyingCandidate) {
    const NullModel m = null_threshold(60, 0.5, 1e-3);
    const UpsilonTable table(60, 0.5);
    const auto values = table.distinct_values();
    const auto it = std::find(values.begin(), values.end(), m.threshold);
    ASSERT_NE(it, values.end());
    EXPECT_LE(crossing_probability(table, m.threshold), 1e-3);
    ASSERT_NE(it, values.begin());
    EXPECT_GT(crossing_probability(table, *(it - 1)), 1e-3);
    EXPECT_DOUBLE_EQ(m.exceedance_probability, crossing_probability(table, m.threshold));
    EXPECT_EQ(m.method, ThresholdMethod::ExactDP);
    EXPECT_FALSE(m.standard_error.has_value());
}

TEST(NullThreshold, UnreachableAtTinyKMax) {
    try {
        null_threshold(5, 0.5, 1e-5);
        FAIL() << "expected UnreachableExtremeness";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnreachableExtremeness);
        EXPECT_NE(std::string(e.what()).find("0.03125"), std::string::npos);
    }
}

TEST(NullThreshold, InvalidArguments) {
    EXPECT_THROW(null_threshold(50, 0.5, 0.0), Error);
    EXPECT_THROW(null_threshold(50, 0.5, 1.0), Error);
    EXPECT_THROW(null_threshold(50, 1.0, 1e-3), Error);
    EXPECT_THROW(null_threshold(0, 0.5, 1e-3), Error);
}

TEST(NullThreshold, SymmetricScansAtHalf) {
    // The reference scan uses 1 - p_hat; at p_hat = 0.5 both thresholds coincide.
    EXPECT_EQ(null_threshold(200, 0.5, 1e-4).threshold, null_threshold(200, 1.0 - 0.5, 1e-4).threshold);
}

TEST(NullThreshold, MonotoneInPExt) {
    double prev = 0.0;
    for (const double pe : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double t = null_threshold(150, 0.5, pe).threshold;
        EXPECT_GT(t, prev);
        prev = t;
    }
}

TEST(MonteCarlo, IndependentOfWorkerCount) {
    const UpsilonTable table(80, 0.5);
    std::vector<double> a, b;
    {
        support::WorkerScope s(1);
        a = simulate_null_maxima(table, 20000, 7);
    }
    {
        support::WorkerScope s(3);
        b = simulate_null_maxima(table, 20000, 7);
    }
    EXPECT_EQ(a, b);
    EXPECT_NE(a, simulate_null_maxima(table, 20000, 8));
}

TEST(MonteCarlo, EmpiricalTailMatchesDp) {
    const UpsilonTable table(50, 0.45);
    const auto maxima = simulate_null_maxima(table, 200000, 3);
    const double t = 5.0;
    const double frac = static_cast<double>(std::count_if(maxima.begin(), maxima.end(),
                                                          [&](double m) { return m >= t; })) /
                        maxima.size();
    const double p = crossing_probability(table, t);
    EXPECT_NEAR(frac, p, 4.0 * std::sqrt(p * (1 - p) / maxima.size()));
}

TEST(MonteCarlo, ThresholdWithinStandardErrors) {
    const NullModel dp = null_threshold(60, 0.5, 1e-2);
    const NullModel mc = null_threshold(60, 0.5, 1e-2, ThresholdMethod::MonteCarlo, 11, 200000);
    ASSERT_TRUE(mc.standard_error.has_value());
    EXPECT_EQ(mc.mc_sample_count, 200000u);
    EXPECT_LE(std::abs(mc.threshold - dp.threshold), 3.0 * *mc.standard_error + 1e-9);
}
