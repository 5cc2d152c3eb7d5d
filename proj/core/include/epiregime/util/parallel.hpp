#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace epiregime {

/// Run fn(i) for i in [0, n). With threads <= 1 the loop is sequential.
/// Work items must be independent (each writes only its own slots); all
/// particle loops in this project satisfy that, with reductions done
/// sequentially afterwards so results do not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace epiregime
