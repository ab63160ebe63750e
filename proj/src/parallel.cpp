#include "eagleeye/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace eagleeye {

namespace {
std::atomic<std::size_t> g_override{0};
}

std::size_t parse_worker_count(const char* text) {
    if (text == nullptr || *text == '\0') return 0;
    std::size_t value = 0;
    const char* end = text + std::strlen(text);
    auto [ptr, ec] = std::from_chars(text, end, value);
    if (ec != std::errc{} || ptr != end) return 0;
    return value;
}

std::size_t worker_count() {
    if (const std::size_t o = g_override.load(); o != 0) return o;
    const std::size_t hardware = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const std::size_t env = parse_worker_count(std::getenv("EAGLEEYE_THREADS")); env != 0) {
        return std::min(env, hardware);
    }
    return hardware;
}

void set_worker_count(std::size_t n) { g_override.store(n); }

}  // namespace eagleeye
