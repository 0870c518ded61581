#pragma once

#include <cstddef>
#include <functional>

namespace catdec {

/// Worker count from CATDEC_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, n) over contiguous blocks on worker_count()
/// threads. Each index must write only its own output slot; results are then
/// independent of scheduling. The first exception thrown by body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace catdec
