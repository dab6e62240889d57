#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "locksem/trace.hpp"

namespace locksem {

inline constexpr std::size_t kDefaultCrpCap = 1'000'000;

class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(std::size_t cap)
      : std::runtime_error("more than " + std::to_string(cap) + " correctly reordered prefixes"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// Number of events already scheduled from each thread, indexed by the dense
// thread slots of a ScheduleSpace (ascending thread id).
struct SchedState {
  std::vector<std::uint32_t> progress;
  bool operator==(const SchedState&) const = default;
};

struct SchedStateHash {
  std::size_t operator()(const SchedState& s) const noexcept;
};

// The graph of schedules of a well-formed trace. A state is the per-thread
// progress vector; an edge schedules the next event of one thread when that
// event is enabled:
//   - a thread other than 1 needs its fork already scheduled,
//   - no join of the thread may be scheduled yet,
//   - lock(m) needs m free (no thread's scheduled prefix ends holding m),
//   - join(u) by t needs u != t and at least one event of u scheduled.
// The sequences spelled by paths from the empty state are exactly the
// correctly reordered prefixes of the trace.
class ScheduleSpace {
 public:
  // Throws std::invalid_argument if `trace` is not well formed.
  explicit ScheduleSpace(const Trace& trace);

  const Trace& trace() const { return trace_; }
  std::size_t thread_count() const { return threads_.size(); }
  ThreadId thread_at(std::size_t slot) const { return threads_[slot].id; }
  std::size_t slot_of(ThreadId thread) const;

  // Thread slot and per-thread index of the event at trace index `i`.
  std::size_t slot_of_event(std::size_t i) const { return where_[i].slot; }
  std::uint32_t local_index(std::size_t i) const { return where_[i].local; }
  // Trace index of the `k`-th event of thread slot `slot`.
  std::size_t trace_index(std::size_t slot, std::uint32_t k) const { return threads_[slot].events[k]; }
  std::uint32_t thread_length(std::size_t slot) const {
    return static_cast<std::uint32_t>(threads_[slot].events.size());
  }

  SchedState initial() const { return SchedState{std::vector<std::uint32_t>(threads_.size(), 0)}; }
  bool is_final(const SchedState& s) const;
  bool scheduled(const SchedState& s, std::size_t i) const { return s.progress[where_[i].slot] > where_[i].local; }
  // Trace index of the next event of `slot`, if any remains.
  std::optional<std::size_t> next(const SchedState& s, std::size_t slot) const;
  bool enabled(const SchedState& s, std::size_t slot) const;

 private:
  struct ThreadInfo {
    ThreadId id;
    std::vector<std::size_t> events;  // trace indices
    // held[k]: sorted dense lock indices held after the first k events.
    std::vector<std::vector<std::uint32_t>> held;
    std::optional<std::pair<std::size_t, std::uint32_t>> fork_site;
    std::vector<std::pair<std::size_t, std::uint32_t>> join_sites;
  };
  struct Where {
    std::size_t slot;
    std::uint32_t local;
  };

  Trace trace_;
  std::vector<ThreadInfo> threads_;
  std::vector<Where> where_;
  std::vector<std::uint32_t> lock_of_;  // dense lock index per trace index (locks/unlocks only)
};

// Definitional membership test, independent of ScheduleSpace: the candidate
// is well formed and each of its thread projections prefixes the matching
// projection of `trace`. Throws UnknownEvent / std::invalid_argument for bad
// ids and std::invalid_argument if `trace` itself is ill formed.
bool is_crp(std::span<const EventId> candidate, const Trace& trace);

// Visits every correctly reordered prefix exactly once, depth first with
// threads in ascending id order, starting with the empty prefix. Throws
// CapExceeded instead of visiting prefix number cap + 1.
void for_each_crp(const Trace& trace, std::size_t cap,
                  const std::function<void(std::span<const EventId>)>& visit);

std::vector<std::vector<EventId>> enumerate_crps(const Trace& trace, std::size_t cap = kDefaultCrpCap);

// Cardinality of the prefix set via memoized path counting.
std::size_t count_crps(const Trace& trace, std::size_t cap = kDefaultCrpCap);

// e must precede f: every correctly reordered prefix containing f contains e
// earlier. False when e == f.
bool must_precede(const Trace& trace, EventId e, EventId f);

// A correctly reordered prefix that ends in f and does not contain e, or
// nullopt when e must precede f.
std::optional<std::vector<EventId>> must_precede_counterexample(const Trace& trace, EventId e, EventId f);

// All-pairs must-precede relation over trace indices.
class PrecedenceMatrix {
 public:
  PrecedenceMatrix() = default;
  explicit PrecedenceMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  // Index-based: does the event at trace index `e` must-precede the one at `f`?
  bool operator()(std::size_t e, std::size_t f) const { return bits_[f * n_ + e] != 0; }
  void set(std::size_t e, std::size_t f, bool v) { bits_[f * n_ + e] = v ? 1 : 0; }

  bool operator==(const PrecedenceMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;  // row f, column e
};

// One state-space sweep per target event, run in parallel across targets.
PrecedenceMatrix must_precede_matrix(const Trace& trace);
// Pairwise reference: one counterexample search per ordered pair, serially.
PrecedenceMatrix must_precede_matrix_serial(const Trace& trace);

}  // namespace locksem
