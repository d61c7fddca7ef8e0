// parallel.hpp
// Deterministic parallel map over an index range. Work items write only
// to their own index, so the merged result is identical for any thread
// count.

#pragma once

#include <thread>
#include <vector>

namespace wigrec {

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads < 2 || n < 2) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&fn, w, n, threads] {
            for (int i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wigrec
