#pragma once

// Shared fixtures and brute-force oracles for the test suites. Nothing here
// goes through ScheduleSpace except where noted.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "locksem/reorder.hpp"
#include "locksem/trace.hpp"

namespace locksem::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(LOCKSEM_FIXTURE_DIR) + "/" + name; }

inline Trace fixture(const std::string& name) { return parse_trace(read_file(fixture_path(name))); }

inline EventId E(std::uint32_t v) { return EventId{v}; }

inline std::set<EventId> ids(std::initializer_list<std::uint32_t> vs) {
  std::set<EventId> out;
  for (auto v : vs) out.insert(EventId{v});
  return out;
}

inline LockSet locks(std::initializer_list<const char*> names) {
  LockSet out;
  for (auto n : names) out.insert(LockId{n});
  return out;
}

using IdSeq = std::vector<std::uint32_t>;

inline IdSeq raw(std::span<const EventId> s) {
  IdSeq out;
  for (auto id : s) out.push_back(id.value);
  return out;
}

// Cheap necessary condition: each thread contributes its first k events in
// their original order.
inline bool keeps_thread_prefixes(const Trace& trace, const std::vector<EventId>& seq) {
  std::map<ThreadId, std::size_t> taken;
  for (EventId id : seq) {
    const Event& e = trace.event(id);
    std::size_t k = taken[e.thread]++;
    std::size_t seen = 0;
    for (const auto& other : trace.events()) {
      if (other.thread != e.thread) continue;
      if (seen++ == k) {
        if (other.id != id) return false;
        break;
      }
    }
  }
  return true;
}

// Every ordering of every subset of the trace's events that passes is_crp.
// Exponential; keep traces at ten events or fewer.
inline std::set<IdSeq> brute_force_crps(const Trace& trace) {
  std::set<IdSeq> out;
  const std::size_t n = trace.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<EventId> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) subset.push_back(trace[i].id);
    std::sort(subset.begin(), subset.end());
    do {
      if (keeps_thread_prefixes(trace, subset) && is_crp(subset, trace)) out.insert(raw(subset));
    } while (std::next_permutation(subset.begin(), subset.end()));
  }
  return out;
}

// e must precede f by the definition: every listed prefix containing f has e
// strictly before it.
inline bool definitional_must_precede(const std::vector<IdSeq>& prefixes, std::uint32_t e, std::uint32_t f) {
  for (const auto& p : prefixes) {
    auto fi = std::find(p.begin(), p.end(), f);
    if (fi == p.end()) continue;
    if (std::find(p.begin(), fi, e) == fi) return false;
  }
  return true;
}

inline std::vector<IdSeq> all_crps(const Trace& trace, std::size_t cap = kDefaultCrpCap) {
  std::vector<IdSeq> out;
  for_each_crp(trace, cap, [&](std::span<const EventId> p) { out.push_back(raw(p)); });
  return out;
}

// Lock protection decided directly from a list of prefixes, independent of
// the library's lock set code. Exit points are recomputed here by a plain
// scan of the thread's events.
inline bool protected_by(const Trace& trace, const std::vector<IdSeq>& prefixes, std::uint32_t e,
                         const std::string& m) {
  for (std::size_t li = 0; li < trace.size(); ++li) {
    const Event& l = trace[li];
    if (!l.is_lock() || l.lock()->name != m) continue;
    std::vector<std::size_t> rest;
    for (std::size_t i = li + 1; i < trace.size(); ++i)
      if (trace[i].thread == l.thread) rest.push_back(i);
    std::size_t x = li;
    for (std::size_t i : rest) {
      x = i;
      if (trace[i].is_unlock() && trace[i].lock()->name == m) break;
    }
    const Event& exit = trace[x];
    bool closed = exit.is_unlock() && exit.lock()->name == m;
    if (!closed && exit.id.value == e) return true;  // open section: the exit itself

    bool lp1 = true;
    for (const auto& p : prefixes) {
      auto at = [&](std::uint32_t id) { return std::find(p.begin(), p.end(), id); };
      auto xp = at(exit.id.value);
      if (xp == p.end()) continue;
      auto lp = at(l.id.value), ep = at(e);
      if (!(lp != p.end() && ep != p.end() && lp < ep && ep < xp)) {
        lp1 = false;
        break;
      }
    }
    if (lp1) return true;
  }
  return false;
}

}  // namespace locksem::testing
