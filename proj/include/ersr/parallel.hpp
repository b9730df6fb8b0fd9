#pragma once

#include <cstddef>
#include <functional>

namespace ersr {

/// Worker-count cap from the ERSR_THREADS environment variable
/// (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs fn(i) for i in [0, n) across workers. Work items must be
/// independent; results should be written to per-index slots so the outcome
/// does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace ersr
