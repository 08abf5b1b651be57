#pragma once

#include <cstddef>
#include <functional>

namespace dqfe {

/// Worker count used by parallel_for when the caller passes 0.
/// Resolution order: set_default_threads(), then the DQFE_THREADS environment
/// variable, then std::thread::hardware_concurrency().
std::size_t default_threads();
void set_default_threads(std::size_t threads);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
///
/// Indices are handed out dynamically, so body must only write to state owned
/// by index i. The first exception thrown by any body is rethrown after all
/// workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace dqfe
