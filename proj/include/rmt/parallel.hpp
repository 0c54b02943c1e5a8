#pragma once

// Deterministic parallel map over independent Monte Carlo tasks. Each task
// writes into its own slot and draws randomness from a sub-seed derived from
// (master seed, task index), so results are identical for any thread count.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <exception>
#include <functional>
#include <vector>

namespace rmt {

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// f(task_index) is evaluated for task_index in [0, n); exceptions are
/// captured and rethrown on the calling thread.
template <class F>
void parallel_tasks(int n, int threads, F&& f) {
  if (threads <= 0) threads = hardware_threads();
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int k = 0; k < n; ++k) {
    try {
      f(k);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
#else
  for (int k = 0; k < n; ++k) {
    try {
      f(k);
    } catch (...) {
      if (!error) error = std::current_exception();
    }
  }
#endif
  if (error) std::rethrow_exception(error);
}

}  // namespace rmt
