#pragma once

#include <cstddef>
#include <functional>

namespace cembed {

// CEMBED_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned default_threads();

// Calls fn(i) for i in [0, count) on up to `threads` workers (0 = default).
// Static contiguous chunks; the first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace cembed
