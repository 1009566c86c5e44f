#pragma once

#include <cstddef>
#include <functional>

namespace leafspace {

/// Thread cap from LEAFSPACE_THREADS (default 1). Values < 1 are clamped.
int thread_budget();

/// Chunked parallel map over [0, n). Each index writes only its own output
/// slot, so results are byte-identical for every thread count; reductions
/// happen sequentially on the caller side.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace leafspace
