#pragma once

#include <cstddef>
#include <functional>

namespace semdistill {

/// Thread count resolution: explicit `requested` wins; otherwise the
/// SEMDISTILL_THREADS environment variable; otherwise hardware concurrency.
/// 0 means "auto" at every level.
unsigned resolve_threads(unsigned requested = 0);

/// Run fn(i) for i in [0, n), statically partitioned over `threads` workers.
/// Each index is processed exactly once by exactly one worker, so the result
/// is identical to the sequential loop whenever fn(i) writes only to
/// index-i-owned locations. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace semdistill
