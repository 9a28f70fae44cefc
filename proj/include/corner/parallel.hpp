#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace corner {

// Execution policy for the data-parallel kernels. Exec::serial is the plain
// reference loop and is kept for testing; Exec::openmp distributes iterations
// over threads. Every parallel loop in this project writes disjoint output
// slots, so both paths produce bit-identical results for any thread count.
enum class Exec { serial, openmp };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

template <class Body>
void parallel_for(Exec exec, std::int64_t count, Body&& body) {
#ifdef _OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
#else
  (void)exec;
#endif
  for (std::int64_t i = 0; i < count; ++i) body(i);
}

}  // namespace corner
