#ifndef ANISOSTABLE_PARALLEL_HPP
#define ANISOSTABLE_PARALLEL_HPP

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace astab {

// Every hot kernel runs both ways: the serial path is the reference the
// parallel one is tested against.  Work is indexed so that per-index results
// land in preassigned slots; reductions then happen in index order, which
// keeps outputs bit-identical regardless of thread count.
enum class ExecMode { serial, parallel };

template <typename Fn>
void for_each_index(std::int64_t n, ExecMode mode, Fn&& fn) {
    if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
    }
}

} // namespace astab

#endif
