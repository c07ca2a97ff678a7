#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace anuca {

// Deterministic data parallelism: [0, n) is split into contiguous slices,
// one worker per slice, and the caller merges slice results in slice order.
// Nothing downstream may depend on completion order.
//
// fn(slice_index, begin, end) must only touch state owned by its slice.
template <class Fn>
void parallel_slices(std::uint64_t n, int threads, Fn&& fn) {
    if (n == 0) return;
    std::uint64_t workers =
        std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::max(threads, 1)));
    if (workers <= 1) {
        fn(0, std::uint64_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::uint64_t base = n / workers;
    std::uint64_t extra = n % workers;
    std::uint64_t begin = 0;
    for (std::uint64_t w = 0; w < workers; ++w) {
        std::uint64_t len = base + (w < extra ? 1 : 0);
        std::uint64_t end = begin + len;
        pool.emplace_back([&fn, w, begin, end] { fn(static_cast<std::size_t>(w), begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace anuca
