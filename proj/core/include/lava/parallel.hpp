#pragma once

#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lava {

/// Data-parallel width: hardware threads capped by the LAVA_THREADS env var.
/// Work is always split into a fixed chunk grid independent of this value, so
/// results are bit-identical for any thread count.
inline int max_threads() {
#ifdef _OPENMP
  int width = omp_get_max_threads();
#else
  int width = 1;
#endif
  if (const char* cap = std::getenv("LAVA_THREADS")) {
    const int requested = std::atoi(cap);
    if (requested >= 1 && requested < width) width = requested;
  }
  return width;
}

}  // namespace lava
