#pragma once

#include <cstddef>
#include <functional>

namespace tonetk {

// Runs fn(i) for i in [0, n) across worker threads. threads == 0 picks the
// hardware concurrency, threads == 1 runs inline. Work is split into
// contiguous chunks; callers own any synchronization between iterations
// (pure map stages need none).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int effective_thread_count(int threads);

} // namespace tonetk
