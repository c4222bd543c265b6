#ifndef EWLAB_PARALLEL_HPP
#define EWLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ewlab {

/// Worker count from EWLAB_THREADS (0 or unset = hardware concurrency).
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index writes only its own output slot, so
/// results are independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ewlab

#endif  // EWLAB_PARALLEL_HPP
