#ifndef CONVGEOM_PARALLEL_HPP
#define CONVGEOM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace convgeom {

// Worker cap: min(hardware_concurrency, CONVGEOM_THREADS if set).
int worker_count();

// Runs fn(i) for i in [0, n). Work items must write only to their own output
// slots; reductions happen serially afterwards, so results are identical for
// any worker count. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace convgeom

#endif
