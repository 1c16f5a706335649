#pragma once

#include <cstdint>

namespace sfhad {

/// Per-thread tally of floating-point multiplications performed by the
/// instrumented kernels (kronecker_apply, hadamard_evaluate, dense_hadamard).
/// Kernels add their exact loop trip count once per call.
namespace mul_counter {

std::uint64_t value() noexcept;
void reset() noexcept;
void add(std::uint64_t multiplications) noexcept;

} // namespace mul_counter

} // namespace sfhad
