#pragma once

#include <cstddef>
#include <functional>

namespace bgm {

/// Number of worker threads used when a caller passes 0.
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; if any body throws, the exception from the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace bgm
