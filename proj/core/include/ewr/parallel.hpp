#pragma once

#include <cstddef>
#include <functional>

namespace ewr {

/// Upper bound for worker threads used by per-image loops. 0 means
/// std::thread::hardware_concurrency().
void set_thread_limit(unsigned limit);
unsigned thread_limit();

/// Runs body(i) for i in [0, count). Each index writes only its own output
/// slot; callers reduce the slots afterwards in index order, so results do
/// not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ewr
