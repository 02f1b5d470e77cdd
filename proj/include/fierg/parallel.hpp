#pragma once

#include <exception>
#include <vector>

#include <omp.h>

namespace fierg::detail {

// Runs fn(k) for k in [0, count) on up to `workers` OpenMP threads. The first
// exception thrown by any task is rethrown on the calling thread.
template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count > 0 ? count : 0);
#pragma omp parallel for num_threads(workers > 0 ? workers : 1) schedule(dynamic, 1)
  for (int k = 0; k < count; ++k) {
    try {
      fn(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fierg::detail
