#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bcinv {

/// Runs body(i) for i in [0, count) on a fixed pool of threads. Each index is
/// handled exactly once and callers write results into per-index slots, so
/// the outcome does not depend on scheduling. The first exception thrown (by
/// lowest index) is rethrown after all workers finish.
template <class Body>
void parallel_for(int count, Body&& body) {
    if (count <= 0) return;
    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::mutex guard;
    int failed_index = count;
    std::exception_ptr failure;
    auto run = [&](int worker) {
        for (int i = worker; i < count; i += workers) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace bcinv
