#include "hsi/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace hsi {

int default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(int64_t begin, int64_t end, int threads,
                  const std::function<void(int64_t, int64_t)>& chunk_fn) {
    const int64_t count = end - begin;
    if (count <= 0) return;
    threads = std::max(1, threads);
    const int64_t workers = std::min<int64_t>(threads, count);
    if (workers == 1) {
        chunk_fn(begin, end);
        return;
    }
    const int64_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int64_t w = 0; w < workers; ++w) {
        const int64_t lo = begin + w * chunk;
        const int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hsi
