#include "kzc/common/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace kzc {

namespace {

/// Chunk grid resolution. Fixed so the decomposition of [0, n) is a pure
/// function of n; threads only decide who executes which chunk.
constexpr std::size_t kChunksPerGrid = 64;

std::size_t chunk_count(std::size_t n) {
    return std::min<std::size_t>(n, kChunksPerGrid);
}

} // namespace

int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t chunks = chunk_count(n);
    const auto chunk_begin = [&](std::size_t c) { return n * c / chunks; };

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c, chunk_begin(c), chunk_begin(c + 1));
        return;
    }

    // Static round-robin assignment of chunks to workers; no atomics needed
    // and the set of chunks each index range covers is thread-count invariant.
    // The first exception a worker raises is rethrown on the calling thread
    // after every worker has joined.
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = static_cast<std::size_t>(w); c < chunks;
                     c += static_cast<std::size_t>(workers)) {
                    fn(c, chunk_begin(c), chunk_begin(c + 1));
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    parallel_chunks(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

double parallel_sum(std::size_t n, int threads, const std::function<double(std::size_t)>& term) {
    if (n == 0) return 0.0;
    std::vector<double> partial(chunk_count(n), 0.0);
    parallel_chunks(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        partial[c] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace kzc
