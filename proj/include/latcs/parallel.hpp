#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "latcs/errors.hpp"

namespace latcs {

/// Runs f(i) for every i in [0, count) using up to `workers` threads.
///
/// Work items are claimed from a shared counter, so the assignment of items
/// to threads is not deterministic; callers must keep determinism by writing
/// each result into a slot owned by its index. The first exception thrown by
/// any item is rethrown on the calling thread after all threads have joined.
inline void parallel_for(std::int64_t count, int workers,
                         const std::function<void(std::int64_t)>& f) {
    if (count <= 0) return;
    if (workers < 1) throw DomainError("worker count must be positive");
    if (workers == 1 || count == 1) {
        for (std::int64_t i = 0; i < count; ++i) f(i);
        return;
    }

    const int nthreads = static_cast<int>(std::min<std::int64_t>(workers, count));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto drain = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace latcs
