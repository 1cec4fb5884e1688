#pragma once

#include <cstddef>
#include <exception>

#include "soqn/execution.hpp"

namespace soqn {

/// Runs body(i) for i in [0, count), in order on the serial path or under
/// an OpenMP dynamic schedule otherwise. Iterations must write disjoint
/// outputs. The first exception raised by any iteration is rethrown once
/// the loop has finished.
template <typename Body>
void parallel_for(std::size_t count, Execution execution, Body&& body) {
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::exception_ptr failure;
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(soqn_parallel_for_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace soqn
