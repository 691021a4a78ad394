#include "seprune/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace seprune {

namespace {

int initial_threads() {
    if (const char* v = std::getenv("SEPRUNE_THREADS")) {
        const int n = std::atoi(v);
        if (n >= 1) return n;
    }
    return 1;
}

std::atomic<int> g_max_threads{initial_threads()};

}  // namespace

int max_threads() { return g_max_threads.load(); }

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

std::size_t block_count(std::size_t count, std::size_t block_size) {
    return block_size == 0 ? 0 : (count + block_size - 1) / block_size;
}

void parallel_blocks(std::size_t count, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    const std::size_t nblocks = block_count(count, block_size);
    const auto run_block = [&](std::size_t b) {
        const std::size_t begin = b * block_size;
        const std::size_t end = begin + block_size < count ? begin + block_size : count;
        fn(b, begin, end);
    };

    const int nthreads = max_threads();
    if (nthreads <= 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            run_block(b);
        }
    };
    const std::size_t spawn =
        std::min<std::size_t>(static_cast<std::size_t>(nthreads), nblocks) - 1;
    std::vector<std::thread> threads;
    threads.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
}

}  // namespace seprune
