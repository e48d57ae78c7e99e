#pragma once

#include <cstdint>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cylab::par {

inline int max_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(i) for i in [0, n). workers <= 1 runs the serial reference loop;
// otherwise the iterations are distributed over an OpenMP team. Results must
// be written to per-index slots so that the output is identical for every
// worker count.
template <class F>
void for_each(std::int64_t n, F&& fn, int workers = 0) {
    if (workers <= 0) workers = max_workers();
#ifdef _OPENMP
    if (workers > 1) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace cylab::par
