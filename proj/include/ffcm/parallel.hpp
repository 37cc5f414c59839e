#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ffcm {

// Shared execution context; threaded through every potentially heavy
// operation.  `budget` caps the number of innermost evaluations an
// operation may schedule (checked up front, never mid-flight).
struct RunCtx {
    int workers = 4;
    std::uint64_t budget = 1'000'000'000ULL;
    bool verbose = false;
};

// Deterministic chunked reduction over the index range [lo, hi).
//
// The range is split into fixed chunks independent of the worker count;
// workers claim chunk indices from a shared counter, and per-chunk results
// are merged strictly in chunk order afterwards.  Any associative merge
// therefore produces bit-identical output for every schedule and worker
// count.  (All merges in this library are in fact commutative and exact,
// but the ordered merge makes determinism unconditional.)
template <class T, class ChunkFn, class MergeFn>
T parallel_reduce(std::uint64_t lo, std::uint64_t hi, T init, ChunkFn chunk_fn, MergeFn merge_fn,
                  int workers, std::uint64_t min_chunk = 4096) {
    if (hi <= lo) return init;
    const std::uint64_t span = hi - lo;
    if (workers < 1) workers = 1;

    std::uint64_t nchunks = (span + min_chunk - 1) / min_chunk;
    const std::uint64_t max_chunks = 32ULL; // fixed: chunking never depends on worker count
    if (nchunks > max_chunks) nchunks = max_chunks;
    if (nchunks == 0) nchunks = 1;
    const std::uint64_t chunk = (span + nchunks - 1) / nchunks;

    std::vector<T> partial(static_cast<std::size_t>(nchunks), init);
    std::atomic<std::uint64_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            const std::uint64_t a = lo + c * chunk;
            const std::uint64_t b = std::min(hi, a + chunk);
            if (a < b) partial[static_cast<std::size_t>(c)] = chunk_fn(a, b);
        }
    };

    if (workers == 1 || nchunks == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const int nthreads = static_cast<int>(std::min<std::uint64_t>(workers, nchunks));
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    T acc = init;
    for (auto& part : partial) acc = merge_fn(acc, part);
    return acc;
}

} // namespace ffcm
