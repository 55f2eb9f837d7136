#pragma once

#include <cstddef>
#include <functional>

namespace lowsig {

/// Worker count: hardware concurrency, capped by LOWSIG_THREADS when set.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are
/// disjoint, so bodies that only write their own output cells are race free.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lowsig
