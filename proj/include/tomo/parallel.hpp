#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace tomo {

inline int resolve_threads(int threads) {
    if (threads > 0)
        return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [begin, end), split into contiguous chunks across
/// threads. threads <= 0 means one per hardware core. Iterations must be
/// independent; each index is visited exactly once.
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, Fn&& fn) {
    std::int64_t count = end - begin;
    if (count <= 0)
        return;
    int nt = resolve_threads(threads);
    if (nt > count)
        nt = static_cast<int>(count);
    if (nt <= 1) {
        for (std::int64_t i = begin; i < end; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::int64_t chunk = (count + nt - 1) / nt;
    for (int w = 0; w < nt; ++w) {
        std::int64_t lo = begin + w * chunk;
        std::int64_t hi = lo + chunk < end ? lo + chunk : end;
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace tomo
