#pragma once

#include <cstddef>
#include <functional>

namespace ccinterp {

/// Worker count: CCINTERP_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs fn(k) for k in [0, n) on up to thread_count() threads. Each index
/// runs exactly once; the first exception (lowest index) is rethrown after
/// all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ccinterp
