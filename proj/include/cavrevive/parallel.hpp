// parallel.hpp — Index-parallel loop honoring CAVREVIVE_THREADS

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace cavrevive {

// Parses a CAVREVIVE_THREADS value; nullopt unless it is a positive integer.
inline std::optional<unsigned> parse_thread_count(const char* text) {
    if (text == nullptr || *text == '\0') return std::nullopt;
    char* end = nullptr;
    const long v = std::strtol(text, &end, 10);
    if (*end != '\0' || v <= 0) return std::nullopt;
    return static_cast<unsigned>(v);
}

inline unsigned worker_count() {
    if (auto n = parse_thread_count(std::getenv("CAVREVIVE_THREADS"))) return *n;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(i) for i in [0, count). Each index is written by exactly one worker, so
// results stored per index do not depend on the thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace cavrevive
