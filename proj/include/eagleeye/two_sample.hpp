#pragma once

#include <span>

namespace eagleeye {

struct TwoSampleResult {
    double ks_statistic = 0.0;
    double ks_pvalue = 1.0;
    double cvm_statistic = 0.0;
    double cvm_pvalue = 1.0;
};

// Two-sample Kolmogorov-Smirnov and Cramer-von Mises tests with asymptotic
// p-values. Ties across samples are handled by evaluating both empirical
// CDFs after each block of equal values; CvM uses midranks.
// Throws EmptySample when either sample is empty.
TwoSampleResult two_sample_tests(std::span<const double> a, std::span<const double> b);

// Survival function of the Kolmogorov distribution, P[K > lambda].
double kolmogorov_survival(double lambda);

// Limiting CDF of the Cramer-von Mises statistic.
double cvm_limit_cdf(double x);

}  // namespace eagleeye
