#pragma once

#include <cstddef>
#include <functional>

namespace cogalign {

// Run fn(i) for i in [0, count) across `jobs` worker threads. Work items must
// be independent; outputs keyed by index stay identical for any job count.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(size_t count, int jobs,
                  const std::function<void(size_t)>& fn);

}  // namespace cogalign
