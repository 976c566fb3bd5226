#pragma once

#include <cstddef>
#include <functional>

namespace smf {

/// Worker count for internal loops: SMF_THREADS if set to a positive
/// integer, otherwise std::thread::hardware_concurrency() (at least 1).
int thread_count();

/// Runs body(i) for i in [begin, end) across up to thread_count() threads.
/// Iterations are split into contiguous chunks; body must only write state
/// owned by its own index, which keeps results independent of the split.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace smf
