#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kzc {

/// Number of hardware threads, at least 1.
int hardware_threads();

/// Splits [0, n) into a fixed number of contiguous chunks and runs
/// fn(chunk_index, begin, end) for each. The chunk grid depends only on n,
/// never on the worker count, so per-chunk results combined in chunk order
/// are identical no matter how many threads execute them. This is what makes
/// ensemble reductions reproducible under --threads.
void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Convenience wrapper: runs fn(i) for every i in [0, n) using the same
/// fixed-chunk decomposition.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Deterministic sum reduction: evaluates term(i) for i in [0, n), accumulates
/// per chunk, then combines the per-chunk partials in chunk-index order.
/// The result is bit-identical for every thread count.
double parallel_sum(std::size_t n, int threads, const std::function<double(std::size_t)>& term);

} // namespace kzc
