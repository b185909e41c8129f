#pragma once

#include <cstddef>
#include <functional>

namespace hvdp {

// Runs fn(i) for every i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Work is claimed in index order; the first exception thrown by
// any task is rethrown after all workers have joined.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

unsigned resolve_threads(unsigned requested);

}  // namespace hvdp
