#pragma once

#include <cstddef>
#include <functional>

namespace holevo::detail {

/// Worker count: HOLEVO_LAB_THREADS when set (>= 1), otherwise the hardware
/// concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n). Each index writes only its own slot, so
/// results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace holevo::detail
