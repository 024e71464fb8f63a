#pragma once

#include <functional>

#include "nsfemdg/common.hpp"

namespace nsfemdg {

/// Worker count: NSFEMDG_THREADS if set and positive, otherwise the hardware
/// concurrency (at least 1).
int worker_count();

/// Runs `body(begin, end)` over contiguous chunks of [0, n). Each index is
/// visited exactly once; callers write only to slots owned by their indices,
/// so results do not depend on the worker count.
void parallel_for(Index n, const std::function<void(Index, Index)>& body);

}  // namespace nsfemdg
