#pragma once

// Deterministic parallel map over an index range. The OpenMP path writes
// each slot independently with a static schedule, so results are bitwise
// identical to the serial reference regardless of thread count. The serial
// versions are kept as the reference implementation for tests and for the
// benchmark target.

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdnls::par {

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void for_each_index(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < (long long)n; ++i) f((std::size_t)i);
}

template <class F>
void for_each_index_serial(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class T, class F>
std::vector<T> map(std::size_t n, F&& f) {
    std::vector<T> out(n);
    for_each_index(n, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

template <class T, class F>
std::vector<T> map_serial(std::size_t n, F&& f) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
}

} // namespace qdnls::par
