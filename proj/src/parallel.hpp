#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mdbl::detail {

inline unsigned resolve_workers(unsigned requested) noexcept {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, count) into chunks handed out in order to `workers` threads.
// fn(worker, begin, end) runs concurrently; each worker id is owned by exactly
// one thread. The first exception thrown by any worker is rethrown here.
template <class Fn>
void parallel_chunks(uint64_t count, uint64_t chunk, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, (count + chunk - 1) / chunk));
    if (workers <= 1) {
        for (uint64_t begin = 0; begin < count; begin += chunk)
            fn(0u, begin, std::min(count, begin + chunk));
        return;
    }
    std::atomic<uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const uint64_t begin = next.fetch_add(chunk);
                    if (begin >= count) break;
                    fn(w, begin, std::min(count, begin + chunk));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace mdbl::detail
