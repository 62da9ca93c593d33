#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace voronet {

/// Runs fn(i) for i in [begin, end) across up to hardware_concurrency()
/// threads. Iterations must be independent; each writes only its own slot.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn,
                  std::size_t min_grain = 1024) {
    const std::size_t count = end > begin ? end - begin : 0;
    if (count == 0) return;

    std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, (count + min_grain - 1) / min_grain);
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }

    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace voronet
