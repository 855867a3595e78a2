#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace tauq {

/// Global worker cap, settable from the CLI (--threads). Defaults to the
/// hardware concurrency. Results never depend on this value: workers write
/// to disjoint output slots and reductions run in a fixed order.
inline std::atomic<int>& max_threads_slot() {
    static std::atomic<int> n{0};
    return n;
}

inline void set_max_threads(int n) {
    max_threads_slot().store(n > 0 ? n : 0);
}

inline int max_threads() {
    int n = max_threads_slot().load();
    if (n > 0) return n;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, n) on up to max_threads() workers with static
/// contiguous partitioning. fn must only touch state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tauq
