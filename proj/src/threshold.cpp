#include "eagleeye/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eagleeye/parallel.hpp"
#include "eagleeye/rng.hpp"

namespace eagleeye {

namespace {

constexpr std::size_t kBlockSize = 4096;

[[noreturn]] void throw_unreachable(std::size_t k_max, double p_success, double p_ext,
                                    double best_probability, double best_threshold) {
    std::ostringstream msg;
    msg << "no threshold reaches p_ext = " << p_ext << " for k_max = " << k_max
        << ", p = " << p_success << "; the most extreme achievable exceedance probability is "
        << best_probability << " (score " << best_threshold << ")";
    throw Error(ErrorCode::UnreachableExtremeness, msg.str());
}

}  // namespace

double crossing_probability(const UpsilonTable& table, double threshold) {
    const std::size_t k_max = table.k_max();
    const double p = table.p_success();
    std::vector<double> cur(k_max + 2, 0.0);
    std::vector<double> next(k_max + 2, 0.0);
    cur[0] = 1.0;
    std::size_t live = 1;  // states 0..live-1 may hold mass
    double absorbed = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(live + 1), 0.0);
        for (std::size_t s = 0; s < live; ++s) {
            next[s] += cur[s] * (1.0 - p);
            next[s + 1] += cur[s] * p;
        }
        // Scores grow with s at fixed k, so the crossing states form a suffix.
        std::size_t boundary = live + 1;
        while (boundary > 0 && table(boundary - 1, k) >= threshold) --boundary;
        for (std::size_t s = boundary; s <= live; ++s) absorbed += next[s];
        live = boundary;
        std::swap(cur, next);
        if (live == 0) break;
    }
    return absorbed;
}

std::vector<double> simulate_null_maxima(const UpsilonTable& table, std::size_t n,
                                         std::uint64_t seed) {
    std::vector<double> maxima(n);
    const std::size_t k_max = table.k_max();
    const double p = table.p_success();
    const bool fair = p == 0.5;
    const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
    parallel_for(blocks, [&](std::size_t block) {
        CounterRng rng(seed, block);
        const std::size_t begin = block * kBlockSize;
        const std::size_t end = std::min(n, begin + kBlockSize);
        for (std::size_t i = begin; i < end; ++i) {
            std::size_t s = 0;
            double best = 0.0;
            std::uint64_t bits = 0;
            for (std::size_t k = 1; k <= k_max; ++k) {
                bool success;
                if (fair) {
                    if ((k - 1) % 64 == 0) bits = rng.next();
                    success = bits & 1u;
                    bits >>= 1;
                } else {
                    success = rng.uniform() < p;
                }
                s += success ? 1 : 0;
                best = std::max(best, table(s, k));
            }
            maxima[i] = best;
        }
    });
    return maxima;
}

NullModel null_threshold(std::size_t k_max, double p_success, double p_ext,
                         ThresholdMethod method, std::uint64_t seed,
                         std::size_t n_null_sequences) {
    if (!(p_ext > 0.0 && p_ext < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "p_ext must lie in (0, 1)");
    }
    if (!(p_success > 0.0 && p_success < 1.0)) {
        throw Error(ErrorCode::DomainError, "success probability must lie in (0, 1)");
    }
    const UpsilonTable table(k_max, p_success);
    const std::vector<double> candidates = table.distinct_values();

    NullModel model;
    model.k_max = k_max;
    model.p_success = p_success;
    model.p_ext = p_ext;
    model.method = method;

    if (method == ThresholdMethod::ExactDP) {
        const double top = candidates.back();
        const double top_probability = crossing_probability(table, top);
        if (top_probability > p_ext) {
            throw_unreachable(k_max, p_success, p_ext, top_probability, top);
        }
        // Crossing probability is non-increasing in the threshold: find the
        // first candidate whose probability is within p_ext.
        std::size_t lo = 0;
        std::size_t hi = candidates.size() - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (crossing_probability(table, candidates[mid]) <= p_ext) hi = mid;
            else lo = mid + 1;
        }
        model.threshold = candidates[lo];
        model.exceedance_probability = crossing_probability(table, model.threshold);
        return model;
    }

    if (n_null_sequences == 0) {
        throw Error(ErrorCode::InvalidConfig, "n_null_sequences must be positive");
    }
    std::vector<double> maxima = simulate_null_maxima(table, n_null_sequences, seed);
    std::sort(maxima.begin(), maxima.end());
    const std::size_t n = maxima.size();
    // Same rule as the exact method applied to the empirical law: the
    // smallest achievable score exceeded by at most floor(p_ext * n) draws.
    const auto allowed = static_cast<std::size_t>(std::floor(p_ext * static_cast<double>(n)));
    const double pivot = maxima[n - 1 - allowed];
    const auto it = std::upper_bound(candidates.begin(), candidates.end(), pivot);
    if (it == candidates.end()) {
        throw_unreachable(k_max, p_success, p_ext,
                          static_cast<double>(allowed + 1) / static_cast<double>(n), pivot);
    }
    model.threshold = *it;
    model.mc_sample_count = n;
    const auto exceed = static_cast<std::size_t>(
        maxima.end() - std::lower_bound(maxima.begin(), maxima.end(), model.threshold));
    model.exceedance_probability = static_cast<double>(exceed) / static_cast<double>(n);

    const double level = 1.0 - p_ext;
    const double center = level * static_cast<double>(n);
    const double spread = std::sqrt(static_cast<double>(n) * level * p_ext);
    const auto clamp_rank = [n](double r) {
        return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n - 1)));
    };
    const std::size_t lo_rank = clamp_rank(std::floor(center - spread));
    const std::size_t hi_rank = clamp_rank(std::ceil(center + spread));
    model.standard_error = 0.5 * (maxima[hi_rank] - maxima[lo_rank]);
    return model;
}

}  // namespace eagleeye
