#pragma once

#include <cstddef>
#include <functional>

namespace fpm {

/// Worker count: hardware concurrency, capped by FPM_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) over worker_count() threads. Indices are
/// handed out dynamically; the first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fpm
