#pragma once

#include <cstddef>
#include <functional>

namespace relsize {

/// Number of worker threads used when the caller asks for 0 jobs.
int default_jobs();

/// Runs body(i) for i in [0, n) on at most `jobs` threads (0 = default_jobs()).
/// Exceptions thrown by body propagate to the caller.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace relsize
