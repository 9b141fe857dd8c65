// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace trendcast {

/// Thread cap: TRENDCAST_THREADS when set, otherwise hardware concurrency.
inline std::size_t thread_cap() {
    if (const char* env = std::getenv("TRENDCAST_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(0..count-1) over a small thread pool. Tasks must be independent
/// and write only to their own slots so results match the serial order.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min(thread_cap(), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace trendcast
