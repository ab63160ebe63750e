#include "eagleeye/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "eagleeye/error.hpp"

namespace eagleeye {

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (lambda < 1.18) {
        // Theta-function form converges fast for small arguments.
        const double w = pi * pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 8; ++k) {
            const double m = 2.0 * k - 1.0;
            s += std::exp(-m * m * w);
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double cvm_limit_cdf(double x) {
    if (x <= 0.0) return 0.0;
    constexpr double pi = std::numbers::pi;
    double total = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double y = 4.0 * k + 1.0;
        const double q = y * y / (16.0 * x);
        const double u = std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) /
                         (std::pow(pi, 1.5) * std::sqrt(x));
        const double bessel = q > 700.0 ? 0.0 : std::cyl_bessel_k(0.25, q);
        const double term = u * std::sqrt(y) * std::exp(-q) * bessel;
        total += term;
        if (std::abs(term) < 1e-7) break;
    }
    return total;
}

namespace {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double x;
        if (j == b.size() || (i < a.size() && a[i] <= b[j])) x = a[i];
        else x = b[j];
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Cramer-von Mises T with the asymptotic p-value of the standardized
// statistic.
std::pair<double, double> cvm_test(std::span<const double> a, std::span<const double> b) {
    const std::size_t nx = a.size();
    const std::size_t ny = b.size();
    const std::size_t n = nx + ny;
    struct Item {
        double value;
        bool from_a;
    };
    std::vector<Item> pooled;
    pooled.reserve(n);
    for (const double v : a) pooled.push_back({v, true});
    for (const double v : b) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(),
              [](const Item& l, const Item& r) { return l.value < r.value; });

    // Midranks; within a tie block the ranks are equal, so the order of
    // a and b items inside it does not matter.
    double ua = 0.0, ub = 0.0;
    std::size_t ia = 0, ib = 0;
    for (std::size_t s = 0; s < n;) {
        std::size_t e = s;
        while (e < n && pooled[e].value == pooled[s].value) ++e;
        const double rank = 0.5 * (static_cast<double>(s + 1) + static_cast<double>(e));
        for (std::size_t t = s; t < e; ++t) {
            if (pooled[t].from_a) {
                const double diff = rank - static_cast<double>(++ia);
                ua += diff * diff;
            } else {
                const double diff = rank - static_cast<double>(++ib);
                ub += diff * diff;
            }
        }
        s = e;
    }
    const double dx = static_cast<double>(nx);
    const double dy = static_cast<double>(ny);
    const double dn = static_cast<double>(n);
    const double k = dx * dy;
    const double u = dx * ua + dy * ub;
    const double t = u / (k * dn) - (4.0 * k - 1.0) / (6.0 * dn);

    const double et = (1.0 + 1.0 / dn) / 6.0;
    double vt = (dn + 1.0) * (4.0 * k * dn - 3.0 * (dx * dx + dy * dy) - 2.0 * k);
    vt /= 45.0 * dn * dn * 4.0 * k;
    const double tn = 1.0 / 6.0 + (t - et) / std::sqrt(45.0 * vt);
    const double p = tn < 0.003 ? 1.0 : std::max(0.0, 1.0 - cvm_limit_cdf(tn));
    return {t, p};
}

}  // namespace

TwoSampleResult two_sample_tests(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::EmptySample, "two-sample test needs two non-empty samples");
    }
    TwoSampleResult r;
    r.ks_statistic = ks_statistic({a.begin(), a.end()}, {b.begin(), b.end()});
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    r.ks_pvalue = kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * r.ks_statistic);
    std::tie(r.cvm_statistic, r.cvm_pvalue) = cvm_test(a, b);
    return r;
}

}  // namespace eagleeye
