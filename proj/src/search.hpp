#pragma once

#include <optional>
#include <vector>

#include "locksem/reorder.hpp"

namespace locksem::detail {

// Schedule (as trace indices) reaching a state where `f` is enabled while `e`
// is still unscheduled, followed by `f` itself; nullopt if none exists.
std::optional<std::vector<std::size_t>> find_counterexample(const ScheduleSpace& space, std::size_t e,
                                                            std::size_t f);

// Per-slot minimum progress over all reachable states in which `f` is
// enabled. The event at index i must-precede f iff
// local_index(i) < frontier[slot_of_event(i)].
std::vector<std::uint32_t> precedence_frontier(const ScheduleSpace& space, std::size_t f);

}  // namespace locksem::detail
