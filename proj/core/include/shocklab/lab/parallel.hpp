#pragma once

#include <cstddef>
#include <functional>

namespace shocklab::lab {

/// Worker count from LAB_WORKERS, else the hardware concurrency (at least 1).
unsigned default_workers();

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Indices are
/// claimed from a shared counter; the first exception is rethrown after all
/// threads have joined.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

} // namespace shocklab::lab
