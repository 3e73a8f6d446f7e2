#pragma once

#include <cstdint>
#include <functional>

namespace gkt {

/// Runs fn(begin, end) over disjoint blocks of [0, count) on `threads`
/// workers. threads <= 1 runs inline. Callers must write disjoint outputs;
/// results are then independent of the schedule.
void parallel_for(int64_t count, int threads, const std::function<void(int64_t, int64_t)>& fn);

} // namespace gkt
