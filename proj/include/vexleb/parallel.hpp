#pragma once

#include <cstddef>
#include <functional>

namespace vexleb {

// Worker count: VEXLEB_THREADS if set and positive, otherwise hardware concurrency.
unsigned worker_count();

// Calls body(k) for k in [0, n). Each index must write only its own outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace vexleb
