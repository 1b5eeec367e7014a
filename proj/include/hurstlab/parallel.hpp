#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hurstlab {

/// Run fn(i) for i in [0, n) across up to `threads` workers (0 = hardware
/// concurrency). Each index is processed exactly once; the first exception,
/// if any, is rethrown on the calling thread. Results must be written to
/// per-index slots so the outcome is independent of scheduling.
template <class Fn>
void parallel_for_index(std::size_t n, Fn&& fn, unsigned threads = 0) {
    if (n == 0) return;
    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > n) workers = static_cast<unsigned>(n);

    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hurstlab
