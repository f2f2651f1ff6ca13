#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace arps {

/// Worker count: `requested` if nonzero, otherwise the hardware concurrency,
/// capped by the ARPS_SDE_THREADS environment variable when set.
unsigned resolve_workers(unsigned requested = 0);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunking affects
/// scheduling only; callers write results by index.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace arps
