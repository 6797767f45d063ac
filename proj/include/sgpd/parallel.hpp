#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace sgpd {

// Thread count resolution: explicit request first, then the
// GPD_SPARSIFY_THREADS environment variable, then 1.
[[nodiscard]] inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GPD_SPARSIFY_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// Runs body(begin, end) over a contiguous partition of [0, n). Chunk
// boundaries depend only on n and the thread count, and workers write to
// disjoint output slots, so results are identical to a sequential run.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    threads = resolve_thread_count(threads);
    if (threads <= 1 || n < 2) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace sgpd
