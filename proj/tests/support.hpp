#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "eagleeye/types.hpp"

namespace support {

inline std::vector<double> uniform_block(std::size_t n, std::size_t dim, std::uint64_t seed,
                                         double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n * dim);
    for (auto& x : v) x = u(gen);
    return v;
}

inline std::vector<double> gaussian_block(std::size_t n, std::size_t dim, std::uint64_t seed,
                                          const std::vector<double>& center, double sigma) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> v(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) v[i * dim + j] = center[j] + g(gen);
    return v;
}

inline std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size());
    std::copy(a.begin(), a.end(), out.begin());
    std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return out;
}

inline eagleeye::Dataset dataset(std::vector<double> coords, std::size_t dim, eagleeye::Role role) {
    return eagleeye::Dataset(dim, std::move(coords), role);
}

// Restores the default worker count when leaving scope.
struct WorkerScope {
    explicit WorkerScope(std::size_t n);
    ~WorkerScope();
};

}  // namespace support

#include "eagleeye/parallel.hpp"

inline support::WorkerScope::WorkerScope(std::size_t n) { eagleeye::set_worker_count(n); }
inline support::WorkerScope::~WorkerScope() { eagleeye::set_worker_count(0); }
