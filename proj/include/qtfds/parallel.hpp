#pragma once

#include <cstddef>

namespace qtfds {

/// Execution policy for the per-frequency / per-mass / per-candidate kernels.
/// Serial is the reference path kept for testing; OpenMP is the default in the
/// tools. Iterations must be independent, so both paths produce identical
/// results.
enum class Exec { Serial, OpenMP };

template <typename F>
void parallel_for(std::size_t n, Exec exec, F&& body) {
  if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

} // namespace qtfds
