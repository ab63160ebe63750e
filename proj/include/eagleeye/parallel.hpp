#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eagleeye {

// Number of workers used by parallel maps: the hardware concurrency, capped
// by the EAGLEEYE_THREADS environment variable when it holds a positive
// integer.
std::size_t worker_count();

// Overrides worker_count() process-wide, cap included; 0 restores the
// default.
void set_worker_count(std::size_t n);

// Parses a worker-count string; returns 0 for anything that is not a
// positive integer.
std::size_t parse_worker_count(const char* text);

/// Calls fn(i) for every i in [0, n) across worker_count() threads.
///
/// Work is split into contiguous static chunks. fn must only write to
/// slots owned by i, which makes results independent of the schedule.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace eagleeye
