#ifndef SCFA_PARALLEL_HPP
#define SCFA_PARALLEL_HPP

#include <optional>

namespace scfa {

// Worker cap applied to every OpenMP region in the library. Results never
// depend on it; only wall-clock time does.
void set_thread_limit(int threads);
int thread_limit();

// Reads SCFA_THREADS; returns nullopt when unset or not a positive integer.
std::optional<int> thread_limit_from_env();

}  // namespace scfa

#endif  // SCFA_PARALLEL_HPP
