#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "locksem/trace.hpp"

namespace locksem {

enum class WfCondition { Acq, Rel, Fork1, Fork2, Join1, Join2 };

// "WF-Acq", "WF-Rel", ...
std::string_view to_string(WfCondition c);

struct WfViolation {
  WfCondition condition;
  std::vector<EventId> witnesses;
  std::string message;
};

// Checks every well-formedness condition and reports all breaches, ordered by
// the position of the first witness and then by condition name. An empty
// result means the trace is well formed.
std::vector<WfViolation> validate(const Trace& trace);

inline bool is_well_formed(const Trace& trace) { return validate(trace).empty(); }

// Throws std::invalid_argument listing the violations if `trace` is ill formed.
void require_well_formed(const Trace& trace);

}  // namespace locksem
