#include <cstdint>

#include "locksem/reorder.hpp"
#include "search.hpp"

namespace locksem {

PrecedenceMatrix must_precede_matrix(const Trace& trace) {
  ScheduleSpace space(trace);
  const auto n = static_cast<std::int64_t>(trace.size());
  PrecedenceMatrix out(trace.size());

  // Rows are disjoint, so each iteration writes only its own slice.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t f = 0; f < n; ++f) {
    auto frontier = detail::precedence_frontier(space, static_cast<std::size_t>(f));
    for (std::size_t e = 0; e < trace.size(); ++e)
      out.set(e, static_cast<std::size_t>(f), space.local_index(e) < frontier[space.slot_of_event(e)]);
  }
  return out;
}

PrecedenceMatrix must_precede_matrix_serial(const Trace& trace) {
  ScheduleSpace space(trace);
  PrecedenceMatrix out(trace.size());
  for (std::size_t f = 0; f < trace.size(); ++f)
    for (std::size_t e = 0; e < trace.size(); ++e)
      out.set(e, f, e != f && !detail::find_counterexample(space, e, f));
  return out;
}

}  // namespace locksem
