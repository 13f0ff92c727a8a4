#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace parentham::detail {

// Splits [begin, end) into contiguous chunks, one per worker. The body must
// only touch state owned by its own index range.
template <typename Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned threads, Body&& body) {
    if (end <= begin) {
        return;
    }
    const std::uint64_t total = end - begin;
    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, total));
    if (workers == 1 || total < 4096) {
        body(begin, end);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = begin + w * chunk;
        const std::uint64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
}

}  // namespace parentham::detail
