#pragma once

#include <cstddef>
#include <functional>

namespace shg {

/// Global worker cap used by parallel_for (set from the CLI --threads flag).
/// 0 means "use hardware concurrency".
void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end) over disjoint chunks of [0, n) on worker threads and
/// blocks until all chunks complete. Falls back to a single inline call when
/// n is small or only one worker is allowed. Exceptions from workers are
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace shg
