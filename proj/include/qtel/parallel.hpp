#pragma once

#include <cstddef>
#include <functional>

namespace qtel {

// Worker-count default: QTEL_THREADS env override, else hardware concurrency.
std::size_t default_threads();

// Runs task(i) for i in [0, n_tasks) on up to `threads` workers.
// Tasks are claimed from a shared atomic counter; each task writes only its
// own output slot, so results are identical for any thread count.
void parallel_for(std::size_t n_tasks, std::size_t threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace qtel
