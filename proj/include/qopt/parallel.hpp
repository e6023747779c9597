#pragma once

#include <cstddef>
#include <functional>

namespace qopt {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Callers write
/// results into slot i so output never depends on scheduling. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace qopt
