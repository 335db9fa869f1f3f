#pragma once

#include <cstddef>
#include <functional>

namespace sliced {

/// Worker count: hardware concurrency capped by SLICED_NUM_THREADS if set.
std::size_t thread_count();

/// Runs body(i) for i in [0, n).  Each index must write only its own output
/// slot; callers reduce afterwards in index order so results do not depend
/// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sliced
