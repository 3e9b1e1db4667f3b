#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hsroot {

/// Number of hardware threads, at least 1.
inline std::size_t default_worker_count() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/**
 * Splits [0, count) into batches of `batch_size` and runs
 * fn(batch_index, begin, end, worker_id) on a fixed pool of workers that pull
 * batches from a shared counter. Returns once every batch has run. The first
 * exception thrown by fn is rethrown in the caller.
 *
 * Workers share nothing but the counter; callers write results into per-batch
 * slots and gather them in batch order, so output does not depend on
 * scheduling.
 */
template <typename Fn>
void for_each_batch(std::size_t count, std::size_t batch_size, std::size_t workers, Fn&& fn) {
    if (count == 0) return;
    batch_size = std::max<std::size_t>(1, batch_size);
    const std::size_t batches = (count + batch_size - 1) / batch_size;
    workers = std::clamp<std::size_t>(workers, 1, batches);

    if (workers == 1) {
        for (std::size_t b = 0; b < batches; ++b) {
            fn(b, b * batch_size, std::min(count, (b + 1) * batch_size), std::size_t{0});
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&](std::size_t worker) {
        for (;;) {
            const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= batches) return;
            try {
                fn(b, b * batch_size, std::min(count, (b + 1) * batch_size), worker);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(batches, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body, w);
    body(0);
    pool.clear();  // joins
    if (error) std::rethrow_exception(error);
}

}  // namespace hsroot
