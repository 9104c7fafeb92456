#pragma once

#include <cstddef>
#include <functional>

namespace smch {

/// Worker count: `requested` if nonzero, else hardware concurrency; always capped
/// by the SMCH_THREADS environment variable when it is set.
unsigned worker_count(unsigned requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions from the
/// body are rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace smch
