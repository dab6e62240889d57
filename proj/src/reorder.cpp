#include "locksem/reorder.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "locksem/wellformed.hpp"
#include "search.hpp"

namespace locksem {

std::size_t SchedStateHash::operator()(const SchedState& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto v : s.progress) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

ScheduleSpace::ScheduleSpace(const Trace& trace) : trace_(trace) {
  require_well_formed(trace_);

  for (ThreadId t : threads_of(trace_)) threads_.push_back(ThreadInfo{t, {}, {}, {}, {}});

  std::map<LockId, std::uint32_t> lock_index;
  lock_of_.assign(trace_.size(), 0);
  where_.resize(trace_.size());
  for (std::size_t i = 0; i < trace_.size(); ++i) {
    const Event& e = trace_[i];
    std::size_t slot = slot_of(e.thread);
    where_[i] = Where{slot, static_cast<std::uint32_t>(threads_[slot].events.size())};
    threads_[slot].events.push_back(i);
    if (const LockId* m = e.lock()) {
      lock_of_[i] = lock_index.emplace(*m, static_cast<std::uint32_t>(lock_index.size())).first->second;
    }
  }

  for (auto& info : threads_) {
    std::vector<std::uint32_t> held;
    info.held.push_back(held);
    for (std::size_t i : info.events) {
      const Event& e = trace_[i];
      if (e.is_lock()) {
        held.insert(std::lower_bound(held.begin(), held.end(), lock_of_[i]), lock_of_[i]);
      } else if (e.is_unlock()) {
        auto it = std::lower_bound(held.begin(), held.end(), lock_of_[i]);
        if (it != held.end() && *it == lock_of_[i]) held.erase(it);
      }
      info.held.push_back(held);
    }
  }

  auto find_slot = [&](ThreadId t) -> std::optional<std::size_t> {
    auto it = std::lower_bound(threads_.begin(), threads_.end(), t,
                               [](const ThreadInfo& info, ThreadId id) { return info.id < id; });
    if (it == threads_.end() || it->id != t) return std::nullopt;
    return static_cast<std::size_t>(it - threads_.begin());
  };
  for (std::size_t i = 0; i < trace_.size(); ++i) {
    const Event& e = trace_[i];
    std::pair<std::size_t, std::uint32_t> site{where_[i].slot, where_[i].local};
    if (auto* f = std::get_if<Fork>(&e.op)) {
      if (auto s = find_slot(f->target)) threads_[*s].fork_site = site;
    } else if (auto* j = std::get_if<Join>(&e.op)) {
      if (auto s = find_slot(j->target)) threads_[*s].join_sites.push_back(site);
    }
  }
}

std::size_t ScheduleSpace::slot_of(ThreadId thread) const {
  auto it = std::lower_bound(threads_.begin(), threads_.end(), thread,
                             [](const ThreadInfo& info, ThreadId id) { return info.id < id; });
  if (it == threads_.end() || it->id != thread)
    throw std::out_of_range("thread " + std::to_string(thread.value) + " has no events");
  return static_cast<std::size_t>(it - threads_.begin());
}

bool ScheduleSpace::is_final(const SchedState& s) const {
  for (std::size_t slot = 0; slot < threads_.size(); ++slot)
    if (s.progress[slot] < threads_[slot].events.size()) return false;
  return true;
}

std::optional<std::size_t> ScheduleSpace::next(const SchedState& s, std::size_t slot) const {
  const auto& events = threads_[slot].events;
  if (s.progress[slot] >= events.size()) return std::nullopt;
  return events[s.progress[slot]];
}

bool ScheduleSpace::enabled(const SchedState& s, std::size_t slot) const {
  const ThreadInfo& info = threads_[slot];
  std::uint32_t k = s.progress[slot];
  if (k >= info.events.size()) return false;

  if (info.id != ThreadId{1}) {
    if (!info.fork_site) return false;
    auto [u, i] = *info.fork_site;
    if (s.progress[u] <= i) return false;
  }
  for (auto [u, i] : info.join_sites)
    if (s.progress[u] > i) return false;

  std::size_t idx = info.events[k];
  const Event& e = trace_[idx];
  if (e.is_lock()) {
    std::uint32_t m = lock_of_[idx];
    for (std::size_t u = 0; u < threads_.size(); ++u) {
      const auto& held = threads_[u].held[s.progress[u]];
      if (std::binary_search(held.begin(), held.end(), m)) return false;
    }
  } else if (auto* j = std::get_if<Join>(&e.op)) {
    if (j->target == info.id) return false;
    auto it = std::lower_bound(threads_.begin(), threads_.end(), j->target,
                               [](const ThreadInfo& t, ThreadId id) { return t.id < id; });
    if (it == threads_.end() || it->id != j->target) return false;
    if (s.progress[static_cast<std::size_t>(it - threads_.begin())] == 0) return false;
  }
  return true;
}

bool is_crp(std::span<const EventId> candidate, const Trace& trace) {
  require_well_formed(trace);
  Trace reordered = trace.select(candidate);
  if (!is_well_formed(reordered)) return false;
  for (ThreadId t : threads_of(reordered)) {
    if (!is_prefix(project_thread(reordered, t), project_thread(trace, t))) return false;
  }
  return true;
}

void for_each_crp(const Trace& trace, std::size_t cap,
                  const std::function<void(std::span<const EventId>)>& visit) {
  ScheduleSpace space(trace);
  SchedState state = space.initial();
  std::vector<EventId> path;
  std::size_t produced = 0;

  auto dfs = [&](auto& self) -> void {
    if (produced == cap) throw CapExceeded(cap);
    ++produced;
    visit(path);
    for (std::size_t slot = 0; slot < space.thread_count(); ++slot) {
      if (!space.enabled(state, slot)) continue;
      path.push_back(trace[*space.next(state, slot)].id);
      ++state.progress[slot];
      self(self);
      --state.progress[slot];
      path.pop_back();
    }
  };
  dfs(dfs);
}

std::vector<std::vector<EventId>> enumerate_crps(const Trace& trace, std::size_t cap) {
  std::vector<std::vector<EventId>> out;
  for_each_crp(trace, cap, [&](std::span<const EventId> p) { out.emplace_back(p.begin(), p.end()); });
  return out;
}

std::size_t count_crps(const Trace& trace, std::size_t cap) {
  ScheduleSpace space(trace);
  std::unordered_map<SchedState, std::size_t, SchedStateHash> memo;
  const std::size_t saturated = cap + 1;

  auto count = [&](auto& self, SchedState& s) -> std::size_t {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    std::size_t total = 1;
    for (std::size_t slot = 0; slot < space.thread_count() && total < saturated; ++slot) {
      if (!space.enabled(s, slot)) continue;
      ++s.progress[slot];
      total = std::min(saturated, total + self(self, s));
      --s.progress[slot];
    }
    memo.emplace(s, total);
    return total;
  };
  SchedState s = space.initial();
  std::size_t n = count(count, s);
  if (n > cap) throw CapExceeded(cap);
  return n;
}

namespace detail {

std::optional<std::vector<std::size_t>> find_counterexample(const ScheduleSpace& space, std::size_t e,
                                                            std::size_t f) {
  const std::size_t f_slot = space.slot_of_event(f);
  const std::size_t e_slot = space.slot_of_event(e);
  const std::uint32_t e_local = space.local_index(e);
  const std::uint32_t f_local = space.local_index(f);

  std::unordered_set<SchedState, SchedStateHash> visited;
  SchedState state = space.initial();
  std::vector<std::size_t> path;

  auto dfs = [&](auto& self) -> bool {
    if (!visited.insert(state).second) return false;
    if (state.progress[f_slot] == f_local && space.enabled(state, f_slot)) {
      path.push_back(f);
      return true;
    }
    for (std::size_t slot = 0; slot < space.thread_count(); ++slot) {
      if (slot == e_slot && state.progress[slot] == e_local) continue;
      if (slot == f_slot && state.progress[slot] == f_local) continue;
      if (!space.enabled(state, slot)) continue;
      path.push_back(*space.next(state, slot));
      ++state.progress[slot];
      if (self(self)) return true;
      --state.progress[slot];
      path.pop_back();
    }
    return false;
  };
  if (dfs(dfs)) return path;
  return std::nullopt;
}

std::vector<std::uint32_t> precedence_frontier(const ScheduleSpace& space, std::size_t f) {
  const std::size_t f_slot = space.slot_of_event(f);
  const std::uint32_t f_local = space.local_index(f);

  std::vector<std::uint32_t> frontier(space.thread_count());
  for (std::size_t slot = 0; slot < frontier.size(); ++slot) frontier[slot] = space.thread_length(slot);
  frontier[f_slot] = f_local;
  std::size_t open_slots = 0;  // slots other than f's with a nonzero frontier
  for (std::size_t slot = 0; slot < frontier.size(); ++slot)
    if (slot != f_slot && frontier[slot] > 0) ++open_slots;

  std::unordered_set<SchedState, SchedStateHash> visited;
  SchedState state = space.initial();

  auto dfs = [&](auto& self) -> void {
    if (open_slots == 0 || !visited.insert(state).second) return;
    if (state.progress[f_slot] == f_local && space.enabled(state, f_slot)) {
      for (std::size_t slot = 0; slot < frontier.size(); ++slot) {
        if (slot == f_slot || state.progress[slot] >= frontier[slot]) continue;
        if (frontier[slot] > 0 && state.progress[slot] == 0) --open_slots;
        frontier[slot] = state.progress[slot];
      }
    }
    for (std::size_t slot = 0; slot < space.thread_count(); ++slot) {
      if (slot == f_slot && state.progress[slot] == f_local) continue;
      if (!space.enabled(state, slot)) continue;
      ++state.progress[slot];
      self(self);
      --state.progress[slot];
    }
  };
  dfs(dfs);
  return frontier;
}

}  // namespace detail

std::optional<std::vector<EventId>> must_precede_counterexample(const Trace& trace, EventId e, EventId f) {
  std::size_t ei = trace.index_of(e);
  std::size_t fi = trace.index_of(f);
  ScheduleSpace space(trace);
  auto path = detail::find_counterexample(space, ei, fi);
  if (!path) return std::nullopt;
  std::vector<EventId> out;
  out.reserve(path->size());
  for (std::size_t i : *path) out.push_back(trace[i].id);
  return out;
}

bool must_precede(const Trace& trace, EventId e, EventId f) {
  if (e == f) {
    trace.index_of(e);
    return false;
  }
  return !must_precede_counterexample(trace, e, f).has_value();
}

}  // namespace locksem
