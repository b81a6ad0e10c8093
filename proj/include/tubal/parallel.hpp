#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace tubal {

/// Caps the number of threads used by slice-parallel loops. 0 restores the
/// runtime default. Results do not depend on the thread count.
void set_max_threads(int n);
int max_threads();

/// Runs body(i) for i in [0, n), possibly in parallel. The first exception
/// thrown by any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace tubal
