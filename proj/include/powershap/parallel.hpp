#pragma once

#include <cstddef>
#include <functional>

namespace powershap {

/// Worker count from POWERSHAP_THREADS (unset or 0 = hardware concurrency).
std::size_t configured_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = use
/// configured_threads()). Each index runs exactly once; the first exception
/// thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace powershap
