#include "sfhad/mul_counter.hpp"

namespace sfhad::mul_counter {

namespace {
thread_local std::uint64_t tally = 0;
}

std::uint64_t value() noexcept { return tally; }
void reset() noexcept { tally = 0; }
void add(std::uint64_t multiplications) noexcept { tally += multiplications; }

} // namespace sfhad::mul_counter
