#pragma once

#include <set>
#include <vector>

#include "locksem/reorder.hpp"
#include "locksem/trace.hpp"

namespace locksem {

// A critical section's delimiters. `open` is set when the exit is not the
// matching unlock, i.e. the lock is never released by its thread.
struct EntryExit {
  EventId entry;
  EventId exit;
  LockId lock;
  ThreadId thread;
  bool open = false;
};

// Exit point of lock event `l`: the first later unlock of the same lock by
// the same thread, else the thread's last event (which is `l` itself when
// nothing follows it). Throws UnknownEvent, or std::invalid_argument when `l`
// is not a lock event.
EventId exit_point(const Trace& trace, EventId l);

// One entry per lock event, in trace order.
std::vector<EntryExit> entry_exit_pairs(const Trace& trace);

// Classic construction, confined to the acquiring thread.
std::set<EventId> per_thread_cs(const Trace& trace, EventId l);
LockSet per_thread_lockset(const Trace& trace, EventId e);

// Trace-based construction: everything that must come after the entry and
// before the exit in every reordering, plus the exit of an open section.
// These answer each query with pairwise must-precede searches.
std::set<EventId> critical_section(const Trace& trace, EventId l);
LockSet lockset(const Trace& trace, EventId e);

// Ground truth by exhaustive enumeration of reordered prefixes. Throws
// CapExceeded when the prefix set outgrows `cap`.
bool protected_by_oracle(const Trace& trace, EventId e, const LockId& m, std::size_t cap = kDefaultCrpCap);
// The protecting locks of every event (indexed by trace index), from a single
// enumeration.
std::vector<LockSet> protection_oracle(const Trace& trace, std::size_t cap = kDefaultCrpCap);

// Precomputed sections and lock sets for every event of one trace. Immutable
// after construction and safe to share between threads.
class LockSetAnalysis {
 public:
  // Builds the must-precede relation with the parallel kernel.
  explicit LockSetAnalysis(const Trace& trace);
  LockSetAnalysis(const Trace& trace, PrecedenceMatrix precedence);

  const Trace& trace() const { return trace_; }
  const PrecedenceMatrix& precedence() const { return precedence_; }
  const std::vector<EntryExit>& sections() const { return sections_; }

  std::set<EventId> critical_section(EventId l) const;
  // Indexed by trace index.
  const std::vector<LockSet>& per_thread() const { return per_thread_; }
  const std::vector<LockSet>& trace_based() const { return trace_based_; }

 private:
  Trace trace_;
  PrecedenceMatrix precedence_;
  std::vector<EntryExit> sections_;
  std::vector<LockSet> per_thread_;
  std::vector<LockSet> trace_based_;
};

struct LockSetRow {
  EventId event;
  ThreadId thread;
  Operation op;
  LockSet per_thread;
  LockSet trace_based;
  LockSet gained;  // trace_based minus per_thread
};

struct LockSetReport {
  std::vector<LockSetRow> rows;  // trace order
};

LockSetReport diff_report(const Trace& trace);
LockSetReport diff_report(const LockSetAnalysis& analysis);
// Same report with the trace-based column taken from the enumeration oracle.
LockSetReport diff_report_oracle(const Trace& trace, std::size_t cap = kDefaultCrpCap);

}  // namespace locksem
