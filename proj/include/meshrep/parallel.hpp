#pragma once

#include <cstddef>
#include <functional>

namespace meshrep {

/// Worker thread count: hardware concurrency, capped by MESHREP_THREADS.
int worker_threads();

/// Runs body(begin, end) over disjoint chunks of [0, n). Results must not
/// depend on the chunking.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace meshrep
