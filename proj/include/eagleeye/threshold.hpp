#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eagleeye/binomial.hpp"
#include "eagleeye/types.hpp"

namespace eagleeye {

/// Critical threshold of the max-over-K score under the Bernoulli null.
struct NullModel {
    std::size_t k_max = 0;
    double p_success = 0.5;
    double p_ext = 1e-5;
    double threshold = 0.0;
    ThresholdMethod method = ThresholdMethod::ExactDP;
    std::size_t mc_sample_count = 0;  // 0 for ExactDP
    // Exact P[max >= threshold] for ExactDP, the empirical fraction for MC.
    double exceedance_probability = 0.0;
    // Order-statistic standard error of the MC quantile.
    std::optional<double> standard_error;

    bool operator==(const NullModel&) const = default;
};

// Exact probability that a Bernoulli(p) walk of table.k_max() steps reaches
// max_K table(S_K, K) >= threshold, by a dynamic program over (K, S_K)
// with the crossing states absorbed.
double crossing_probability(const UpsilonTable& table, double threshold);

// Max statistic of n independent null sequences. Sequences are simulated in
// fixed blocks, each on its own RNG stream, so the output does not depend on
// the worker count.
std::vector<double> simulate_null_maxima(const UpsilonTable& table, std::size_t n,
                                         std::uint64_t seed);

NullModel null_threshold(std::size_t k_max, double p_success, double p_ext,
                         ThresholdMethod method = ThresholdMethod::ExactDP,
                         std::uint64_t seed = 0, std::size_t n_null_sequences = 1'000'000);

}  // namespace eagleeye
