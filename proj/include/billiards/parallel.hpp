#ifndef BILLIARDS_PARALLEL_HPP
#define BILLIARDS_PARALLEL_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace billiards {

// Serial reference loop.  Kept as a first-class code path so results can
// be compared against the OpenMP kernel (see tools/bench_parallel.cpp).
template <typename F>
void serial_for(std::size_t count, F&& fn) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

// Deterministic parallel loop: fn(i) must write only to state owned by
// index i, so the result is identical for every worker count.  workers <= 1
// (or a build without OpenMP) takes the serial reference path.
template <typename F>
void parallel_for(std::size_t count, int workers, F&& fn) {
#ifdef _OPENMP
    if (workers > 1) {
        long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(workers)
        for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)workers;
#endif
    serial_for(count, fn);
}

} // namespace billiards

#endif
