// Deterministic fork-join over index ranges. Work is split into fixed chunks whose
// boundaries depend only on the range and chunk count, never on scheduling.
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace geolab {

// GEODESIC_LAB_THREADS if set to a positive integer, otherwise the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);  // 0 restores the default

// Calls body(begin, end) on consecutive chunks covering [0, n).
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunks, Body&& body) {
    if (n == 0) return;
    if (chunks == 0) chunks = 1;
    if (chunks > n) chunks = n;
    std::size_t workers = std::min(thread_count(), chunks);
    auto range = [&](std::size_t c) { return std::pair<std::size_t, std::size_t>{n * c / chunks, n * (c + 1) / chunks}; };
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            auto [b, e] = range(c);
            body(b, e);
        }
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) {
                try {
                    auto [b, e] = range(c);
                    body(b, e);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    parallel_chunks(n, std::min<std::size_t>(n, 4 * thread_count()), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) body(i);
    });
}

}  // namespace geolab
