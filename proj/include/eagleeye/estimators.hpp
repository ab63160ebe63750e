#pragma once

#include <cstddef>

#include "eagleeye/types.hpp"

namespace eagleeye {

// Counts entering the purity and significance estimates of one direction.
// "own" is the scanned set, "other" the set whose points were injected.
struct EstimatorCounts {
    std::size_t anomalous = 0;
    std::size_t injected = 0;
    std::size_t n_own = 0;
    std::size_t pruned_own = 0;
    std::size_t n_other = 0;
    std::size_t pruned_other = 0;
};

// (n_own - pruned_own) / (n_other - pruned_other). Throws DivisionByZero
// when the other set is entirely pruned.
double background_ratio(std::size_t n_own, std::size_t pruned_own, std::size_t n_other,
                        std::size_t pruned_other);

// (anom - inj * ratio) / anom. May be negative. Throws ZeroAnomaly when
// anom_count is 0 and DivisionByZero as background_ratio().
double purity_estimate(std::size_t anom_count, std::size_t inj_count, std::size_t n_own,
                       std::size_t pruned_own, std::size_t n_other, std::size_t pruned_other);

// (anom - B) / sqrt(B) with B = inj * ratio. Throws ZeroBackground when B is
// 0 and DivisionByZero as background_ratio().
double s_over_sqrt_b_estimate(std::size_t anom_count, std::size_t inj_count, std::size_t n_own,
                              std::size_t pruned_own, std::size_t n_other,
                              std::size_t pruned_other);

// Both estimates with undefined values left empty and explained by flags.
Estimates estimate(const EstimatorCounts& counts);

}  // namespace eagleeye
