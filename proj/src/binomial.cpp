#include "eagleeye/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eagleeye/error.hpp"

namespace eagleeye {

namespace {

double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

void check_domain(std::int64_t b, std::int64_t k, double p) {
    if (k < 1 || b < 0 || b > k || !(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "binomial tail undefined for b=" << b << ", k=" << k << ", p=" << p;
        throw Error(ErrorCode::DomainError, msg.str());
    }
}

}  // namespace

double log_binomial_tail(std::int64_t b, std::int64_t k, double p) {
    check_domain(b, k, p);
    if (b == 0) return 0.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lk = std::lgamma(static_cast<double>(k) + 1.0);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(k - b + 1));
    double top = -std::numeric_limits<double>::infinity();
    for (std::int64_t j = b; j <= k; ++j) {
        const double jd = static_cast<double>(j);
        const double t = lk - std::lgamma(jd + 1.0) - std::lgamma(static_cast<double>(k - j) + 1.0) +
                         jd * lp + static_cast<double>(k - j) * lq;
        terms.push_back(t);
        top = std::max(top, t);
    }
    double sum = 0.0;
    for (const double t : terms) sum += std::exp(t - top);
    return std::min(0.0, top + std::log(sum));
}

double binomial_tail_pvalue(std::int64_t b, std::int64_t k, double p) {
    return std::exp(log_binomial_tail(b, k, p));
}

UpsilonTable::UpsilonTable(std::size_t k_max, double p_success)
    : k_max_(k_max), p_success_(p_success) {
    if (k_max == 0) throw Error(ErrorCode::DomainError, "k_max must be positive");
    check_domain(0, 1, p_success);
    values_.resize(offset(k_max + 1));
    const double lp = std::log(p_success);
    const double lq = std::log1p(-p_success);
    std::vector<double> lfact(k_max + 1);
    for (std::size_t i = 0; i <= k_max; ++i) lfact[i] = std::lgamma(static_cast<double>(i) + 1.0);

    for (std::size_t k = 1; k <= k_max; ++k) {
        double* row = &values_[offset(k)];
        double acc = -std::numeric_limits<double>::infinity();
        for (std::size_t b = k + 1; b-- > 0;) {
            const double lpmf = lfact[k] - lfact[b] - lfact[k - b] +
                                static_cast<double>(b) * lp + static_cast<double>(k - b) * lq;
            acc = log_add(acc, lpmf);
            row[b] = std::max(0.0, -acc);
        }
        row[0] = 0.0;
    }
}

std::vector<double> UpsilonTable::distinct_values() const {
    std::vector<double> out = values_;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

template <class ValueOf>
UpsilonProfile profile_of(std::span<const std::uint8_t> b, ValueOf value_of) {
    UpsilonProfile out;
    out.profile.resize(b.size());
    std::size_t running = 0;
    for (std::size_t k = 1; k <= b.size(); ++k) {
        running += b[k - 1] ? 1 : 0;
        const double v = value_of(running, k);
        out.profile[k - 1] = v;
        out.upsilon = std::max(out.upsilon, v);
    }
    for (std::size_t k = 1; k <= b.size(); ++k) {
        if (ties_maximum(out.profile[k - 1], out.upsilon)) {
            out.k_star = static_cast<std::uint32_t>(k);
            break;
        }
    }
    return out;
}

}  // namespace

UpsilonProfile upsilon_profile(std::span<const std::uint8_t> b, double p_success) {
    return profile_of(b, [p_success](std::size_t s, std::size_t k) {
        return std::max(0.0, -log_binomial_tail(static_cast<std::int64_t>(s),
                                                static_cast<std::int64_t>(k), p_success));
    });
}

UpsilonProfile upsilon_profile(std::span<const std::uint8_t> b, const UpsilonTable& table) {
    if (b.size() > table.k_max()) {
        throw Error(ErrorCode::DomainError, "sequence longer than the table's k_max");
    }
    return profile_of(b, [&table](std::size_t s, std::size_t k) { return table(s, k); });
}

}  // namespace eagleeye
