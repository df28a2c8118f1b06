#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace doblab {

/// Selects the sweep kernel: the OpenMP path or the serial reference.
enum class Exec { serial, parallel };

/// Worker count for parallel sweeps: omp_get_max_threads() capped by the
/// DOB_LAB_THREADS environment variable when it holds a positive integer.
int sweep_threads();

/// Runs body(i) for i in [0, n). Iterations must be independent; callers
/// write results into slot i so the output order never depends on scheduling.
/// If any iteration throws, the exception of the lowest failing index is
/// rethrown after the loop, in both modes.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    const auto count = static_cast<long long>(n);
    if (exec == Exec::serial) {
        for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
        return;
    }
    std::vector<std::exception_ptr> failures(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(sweep_threads())
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace doblab
