#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace aronsson {

/// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. Results that depend on n only through per-index values are
/// identical for every worker count.
inline void parallel_chunks(int threads, int n, const std::function<void(int, int)>& fn) {
    if (threads <= 1 || n < 2 * threads) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        int b = t * chunk;
        int e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

}  // namespace aronsson
