// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <functional>

namespace definetti {

/// Number of worker threads used by parallel loops. Defaults to the
/// hardware concurrency. Results never depend on this value.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

/// Calls body(i) for i in [0, count) across the worker pool. Each index is
/// processed exactly once; if any call throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace definetti
