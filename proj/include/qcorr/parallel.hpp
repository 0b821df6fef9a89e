#pragma once

// Minimal index-partitioned parallel loop. Results must be written by index
// by the callers, so the output never depends on scheduling. QCORR_THREADS
// caps the worker count; unset means hardware default.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qcorr {

inline std::size_t worker_count() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("QCORR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
    }
    return n;
}

// Calls fn(i) for every i in [0, count) using block partitioning.
template <typename Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min(worker_count(), count == 0 ? std::size_t{1} : count);
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(count, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace qcorr
