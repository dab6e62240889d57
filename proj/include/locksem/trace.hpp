#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace locksem {

// Thread 1 is the main thread.
struct ThreadId {
  std::uint32_t value = 1;
  auto operator<=>(const ThreadId&) const = default;
};

struct LockId {
  std::string name;
  auto operator<=>(const LockId&) const = default;
};

struct EventId {
  std::uint32_t value = 0;
  auto operator<=>(const EventId&) const = default;
};

struct Fork {
  ThreadId target;
  bool operator==(const Fork&) const = default;
};
struct Join {
  ThreadId target;
  bool operator==(const Join&) const = default;
};
struct Lock {
  LockId lock;
  bool operator==(const Lock&) const = default;
};
struct Unlock {
  LockId lock;
  bool operator==(const Unlock&) const = default;
};

using Operation = std::variant<Fork, Join, Lock, Unlock>;

std::string to_string(const Operation& op);

struct Event {
  EventId id;
  ThreadId thread;
  Operation op;

  bool is_lock() const { return std::holds_alternative<Lock>(op); }
  bool is_unlock() const { return std::holds_alternative<Unlock>(op); }
  // Name of the lock touched by a lock/unlock event; nullptr otherwise.
  const LockId* lock() const;
};

// Identity is the id alone.
inline bool operator==(const Event& a, const Event& b) { return a.id == b.id; }

using LockSet = std::set<LockId>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownEvent : public std::out_of_range {
 public:
  explicit UnknownEvent(EventId id)
      : std::out_of_range("event " + std::to_string(id.value) + " is not in the trace"), id_(id) {}
  EventId id() const { return id_; }

 private:
  EventId id_;
};

// An ordered sequence of events with pairwise distinct ids. Immutable.
class Trace {
 public:
  Trace() = default;
  // Throws std::invalid_argument on duplicate ids.
  explicit Trace(std::vector<Event> events);

  std::span<const Event> events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t index) const { return events_[index]; }

  bool contains(EventId id) const { return index_.contains(id.value); }
  // 0-based index; throws UnknownEvent.
  std::size_t index_of(EventId id) const;
  const Event& event(EventId id) const { return events_[index_of(id)]; }

  // Resolves `ids` against this trace, in the given order. Throws UnknownEvent
  // for foreign ids and std::invalid_argument for repeated ids.
  Trace select(std::span<const EventId> ids) const;

  std::vector<EventId> ids() const;

 private:
  std::vector<Event> events_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

// 1-based position of `id` in `trace`.
std::size_t position(const Trace& trace, EventId id);
// e <T f.
bool trace_order(const Trace& trace, EventId e, EventId f);
Trace project_thread(const Trace& trace, ThreadId thread);
std::set<ThreadId> threads_of(const Trace& trace);
// True iff `prefix` is an initial segment of `trace`, by event identity.
bool is_prefix(const Trace& prefix, const Trace& trace);

// Line format: `<thread>, <op>` or `<id>, <thread>, <op>`. Ids default to the
// ordinal of the line among event lines. '#' starts a comment.
Trace parse_trace(std::string_view text);
// Emits `<thread>, <op>` lines; ids are implied by position.
std::string serialize(const Trace& trace);

}  // namespace locksem

template <>
struct std::hash<locksem::LockId> {
  std::size_t operator()(const locksem::LockId& l) const noexcept {
    return std::hash<std::string>{}(l.name);
  }
};
