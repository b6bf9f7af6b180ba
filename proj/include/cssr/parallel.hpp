#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cssr {

// Worker count: explicit request wins, then CSSR_THREADS, then the hardware.
inline unsigned resolve_thread_count(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("CSSR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs body(i) for i in [0, count) over at most `threads` workers. Each index
// is processed exactly once; bodies must write only to their own slots, which
// keeps results identical to sequential execution regardless of thread count.
// The first body exception is rethrown after all workers join.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(threads > 0 ? threads : 1, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);

    const std::size_t chunk = count / workers;
    const std::size_t rem = count % workers;
    std::size_t begin = 0;
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t size = chunk + (t < rem ? 1 : 0);
        const std::size_t end = begin + size;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& worker : pool) worker.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cssr
