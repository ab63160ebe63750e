#include "eagleeye/estimators.hpp"

#include <cmath>

namespace eagleeye {

double background_ratio(std::size_t n_own, std::size_t pruned_own, std::size_t n_other,
                        std::size_t pruned_other) {
    if (pruned_own > n_own || pruned_other > n_other) {
        throw Error(ErrorCode::DomainError, "pruned count exceeds the set size");
    }
    if (n_other == pruned_other) {
        throw Error(ErrorCode::DivisionByZero, "no unpruned points left in the injected set");
    }
    return static_cast<double>(n_own - pruned_own) / static_cast<double>(n_other - pruned_other);
}

double purity_estimate(std::size_t anom_count, std::size_t inj_count, std::size_t n_own,
                       std::size_t pruned_own, std::size_t n_other, std::size_t pruned_other) {
    if (anom_count == 0) throw Error(ErrorCode::ZeroAnomaly, "purity needs at least one anomaly");
    const double ratio = background_ratio(n_own, pruned_own, n_other, pruned_other);
    const double anom = static_cast<double>(anom_count);
    return (anom - static_cast<double>(inj_count) * ratio) / anom;
}

double s_over_sqrt_b_estimate(std::size_t anom_count, std::size_t inj_count, std::size_t n_own,
                              std::size_t pruned_own, std::size_t n_other,
                              std::size_t pruned_other) {
    const double ratio = background_ratio(n_own, pruned_own, n_other, pruned_other);
    const double background = static_cast<double>(inj_count) * ratio;
    if (background == 0.0) {
        throw Error(ErrorCode::ZeroBackground, "significance undefined without background");
    }
    return (static_cast<double>(anom_count) - background) / std::sqrt(background);
}

Estimates estimate(const EstimatorCounts& c) {
    Estimates e;
    if (c.n_other == c.pruned_other) {
        e.flags.emplace_back(kFlagNoReferenceBackground);
        return e;
    }
    if (c.anomalous > 0) {
        e.purity = purity_estimate(c.anomalous, c.injected, c.n_own, c.pruned_own, c.n_other,
                                   c.pruned_other);
        if (*e.purity < 0.0) e.flags.emplace_back(kFlagNegativePurity);
    }
    const double ratio = background_ratio(c.n_own, c.pruned_own, c.n_other, c.pruned_other);
    if (static_cast<double>(c.injected) * ratio == 0.0) {
        e.flags.emplace_back(kFlagZeroBackground);
    } else {
        e.s_over_sqrt_b = s_over_sqrt_b_estimate(c.anomalous, c.injected, c.n_own, c.pruned_own,
                                                 c.n_other, c.pruned_other);
    }
    return e;
}

}  // namespace eagleeye
