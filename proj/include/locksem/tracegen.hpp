#pragma once

#include <cstdint>

#include "locksem/trace.hpp"

namespace locksem {

struct GenParams {
  std::uint64_t seed = 1;
  std::size_t max_threads = 3;
  std::size_t max_locks = 2;
  std::size_t max_events = 12;
};

// Fraction of forked threads that are allowed to finish while holding a lock.
inline constexpr double kOpenSectionRate = 0.2;

// Random well-formed trace, deterministic in the seed. Out-of-range params are
// clamped (at least one thread; at most 1'000'000 events; at most 1'000
// threads and locks). The trace may end with sections still open and threads
// never joined. Lock names are m1, m2, ...
Trace generate(GenParams params);

}  // namespace locksem
