#pragma once

#include <cstdint>
#include <functional>

namespace gsq {

/// Runs fn(worker, begin, end) over a contiguous partition of [0, n).
/// Results must be written to disjoint, replica-indexed slots so that the
/// outcome is independent of the worker count.
void parallel_chunks(std::uint64_t n, unsigned workers,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& fn);

} // namespace gsq
