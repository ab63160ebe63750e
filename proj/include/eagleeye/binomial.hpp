#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eagleeye {

// Natural log of P[Binomial(k, p) >= b], summed in log space. Accurate to
// roughly 1e-12 relative error in the probability well below 1e-300.
// Throws DomainError unless 0 <= b <= k, k >= 1 and 0 < p < 1.
double log_binomial_tail(std::int64_t b, std::int64_t k, double p);

// P[Binomial(k, p) >= b]; values below the double range underflow to 0,
// use log_binomial_tail() for those.
double binomial_tail_pvalue(std::int64_t b, std::int64_t k, double p);

/// -ln P[Binomial(K, p) >= b] for every 1 <= K <= k_max and 0 <= b <= K.
///
/// Rows are built with a backward log-sum-exp over the pmf, so the whole
/// table costs O(k_max^2).
class UpsilonTable {
public:
    UpsilonTable() = default;
    UpsilonTable(std::size_t k_max, double p_success);

    std::size_t k_max() const { return k_max_; }
    double p_success() const { return p_success_; }

    double operator()(std::size_t b, std::size_t k) const { return values_[offset(k) + b]; }
    std::span<const double> row(std::size_t k) const { return {&values_[offset(k)], k + 1}; }

    // All table values, sorted ascending, duplicates removed.
    std::vector<double> distinct_values() const;

private:
    static std::size_t offset(std::size_t k) { return (k - 1) * (k + 2) / 2; }

    std::size_t k_max_ = 0;
    double p_success_ = 0.5;
    std::vector<double> values_;
};

// Profile values within this relative distance of the maximum count as
// tied when choosing k_star; the table's rounding error is far smaller,
// and exact ties such as P[Bin(2m+1, 1/2) >= m+1] = 1/2 otherwise resolve
// by the last ulp.
inline constexpr double kArgmaxTieTolerance = 1e-12;

inline bool ties_maximum(double value, double maximum) {
    return value >= maximum - kArgmaxTieTolerance * maximum;
}

struct UpsilonProfile {
    double upsilon = 0.0;
    std::uint32_t k_star = 1;  // smallest rank tying the maximum
    std::vector<double> profile;
};

// Profile of -ln pval over prefixes of a membership sequence b (entries 0/1).
UpsilonProfile upsilon_profile(std::span<const std::uint8_t> b, double p_success);
UpsilonProfile upsilon_profile(std::span<const std::uint8_t> b, const UpsilonTable& table);

}  // namespace eagleeye
