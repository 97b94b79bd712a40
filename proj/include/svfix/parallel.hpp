#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace svfix {

/// Worker cap: SVFIX_THREADS when set, hardware concurrency otherwise.
inline int worker_count() {
    if (const char* env = std::getenv("SVFIX_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Index-parallel loop with deterministic slot assignment. Rethrows the
/// first worker exception.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_count(), std::max(1, count));
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace svfix
