#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hns {

// Runs f(i) for i in [0, n) across worker threads in contiguous chunks.
// Each index owns its output slot, so results are identical regardless of
// scheduling. The first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& f, unsigned workers = 0) {
    if (n == 0) return;
    unsigned hw = workers ? workers : std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    if (hw > n) hw = static_cast<unsigned>(n);
    if (hw == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(hw);
    const std::size_t chunk = (n + hw - 1) / hw;
    for (unsigned t = 0; t < hw; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hns
