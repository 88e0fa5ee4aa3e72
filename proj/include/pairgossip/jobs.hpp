#pragma once

#include <cstddef>
#include <functional>

namespace pairgossip {

/// Worker count: PAIRGOSSIP_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
int job_parallelism();

/// Runs job(0..count-1) on up to job_parallelism() threads. Jobs must not
/// share mutable state. The first exception thrown by any job is rethrown
/// after all workers stop.
void run_jobs(std::size_t count, const std::function<void(std::size_t)>& job);

}  // namespace pairgossip
