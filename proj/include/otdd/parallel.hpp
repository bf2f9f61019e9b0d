#ifndef OTDD_PARALLEL_HPP
#define OTDD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace otdd {

/// Resolve a thread-count request: 0 means machine parallelism, anything
/// else is clamped to at least 1.
int resolve_threads(int requested);

/// Run body(lo, hi) over a block partition of [0, n). Blocks are contiguous
/// and disjoint, so results are independent of the thread count as long as
/// each block writes only its own outputs. With threads <= 1 the body runs
/// inline on the calling thread.
void parallel_blocks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace otdd

#endif  // OTDD_PARALLEL_HPP
