#include "locksem/locksets.hpp"

#include <algorithm>

#include "locksem/wellformed.hpp"
#include "search.hpp"

namespace locksem {

namespace {

struct Section {
  std::size_t entry;
  std::size_t exit;
  bool open;
};

std::size_t exit_index(const Trace& trace, std::size_t l) {
  const Event& entry = trace[l];
  const LockId* m = entry.lock();
  if (!entry.is_lock()) {
    throw std::invalid_argument("event " + std::to_string(entry.id.value) + " is " + to_string(entry.op) +
                                ", not a lock event");
  }
  std::size_t last = l;
  for (std::size_t i = l + 1; i < trace.size(); ++i) {
    const Event& e = trace[i];
    if (e.thread != entry.thread) continue;
    if (e.is_unlock() && *e.lock() == *m) return i;
    last = i;
  }
  return last;
}

Section section_of(const Trace& trace, std::size_t l) {
  std::size_t x = exit_index(trace, l);
  const Event& exit = trace[x];
  bool closed = exit.is_unlock() && *exit.lock() == *trace[l].lock();
  return Section{l, x, !closed};
}

std::vector<Section> all_sections(const Trace& trace) {
  std::vector<Section> out;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace[i].is_lock()) out.push_back(section_of(trace, i));
  return out;
}

bool in_per_thread_cs(const Trace& trace, const Section& s, std::size_t e) {
  if (s.open && e == s.exit) return true;
  return trace[e].thread == trace[s.entry].thread && s.entry < e && e < s.exit;
}

LockSet gained(const LockSet& trace_based, const LockSet& per_thread) {
  LockSet out;
  std::set_difference(trace_based.begin(), trace_based.end(), per_thread.begin(), per_thread.end(),
                      std::inserter(out, out.end()));
  return out;
}

std::vector<LockSet> per_thread_all(const Trace& trace, const std::vector<Section>& sections) {
  std::vector<LockSet> out(trace.size());
  for (const Section& s : sections)
    for (std::size_t e = 0; e < trace.size(); ++e)
      if (in_per_thread_cs(trace, s, e)) out[e].insert(*trace[s.entry].lock());
  return out;
}

LockSetReport make_report(const Trace& trace, const std::vector<LockSet>& per_thread,
                          const std::vector<LockSet>& trace_based) {
  LockSetReport report;
  report.rows.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Event& e = trace[i];
    report.rows.push_back(
        LockSetRow{e.id, e.thread, e.op, per_thread[i], trace_based[i], gained(trace_based[i], per_thread[i])});
  }
  return report;
}

}  // namespace

EventId exit_point(const Trace& trace, EventId l) {
  require_well_formed(trace);
  return trace[exit_index(trace, trace.index_of(l))].id;
}

std::vector<EntryExit> entry_exit_pairs(const Trace& trace) {
  require_well_formed(trace);
  std::vector<EntryExit> out;
  for (const Section& s : all_sections(trace)) {
    const Event& l = trace[s.entry];
    out.push_back(EntryExit{l.id, trace[s.exit].id, *l.lock(), l.thread, s.open});
  }
  return out;
}

std::set<EventId> per_thread_cs(const Trace& trace, EventId l) {
  require_well_formed(trace);
  Section s = section_of(trace, trace.index_of(l));
  std::set<EventId> out;
  for (std::size_t e = 0; e < trace.size(); ++e)
    if (in_per_thread_cs(trace, s, e)) out.insert(trace[e].id);
  return out;
}

LockSet per_thread_lockset(const Trace& trace, EventId e) {
  require_well_formed(trace);
  std::size_t ei = trace.index_of(e);
  LockSet out;
  for (const Section& s : all_sections(trace))
    if (in_per_thread_cs(trace, s, ei)) out.insert(*trace[s.entry].lock());
  return out;
}

std::set<EventId> critical_section(const Trace& trace, EventId l) {
  ScheduleSpace space(trace);
  Section s = section_of(trace, trace.index_of(l));
  std::set<EventId> out;
  for (std::size_t e = 0; e < trace.size(); ++e) {
    bool cs1 = !detail::find_counterexample(space, s.entry, e) && !detail::find_counterexample(space, e, s.exit);
    if (cs1 || (s.open && e == s.exit)) out.insert(trace[e].id);
  }
  return out;
}

LockSet lockset(const Trace& trace, EventId e) {
  ScheduleSpace space(trace);
  std::size_t ei = trace.index_of(e);
  LockSet out;
  for (const Section& s : all_sections(trace)) {
    const LockId& m = *trace[s.entry].lock();
    if (out.contains(m)) continue;
    if ((s.open && ei == s.exit) ||
        (!detail::find_counterexample(space, s.entry, ei) && !detail::find_counterexample(space, ei, s.exit)))
      out.insert(m);
  }
  return out;
}

std::vector<LockSet> protection_oracle(const Trace& trace, std::size_t cap) {
  require_well_formed(trace);
  const std::size_t n = trace.size();
  const auto sections = all_sections(trace);

  // inside[k][e]: e has stayed strictly between entry and exit of section k
  // in every prefix seen so far that contains the exit.
  std::vector<std::vector<char>> inside(sections.size(), std::vector<char>(n, 1));
  constexpr std::size_t absent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(n, absent);

  for_each_crp(trace, cap, [&](std::span<const EventId> prefix) {
    std::fill(pos.begin(), pos.end(), absent);
    for (std::size_t k = 0; k < prefix.size(); ++k) pos[trace.index_of(prefix[k])] = k;
    for (std::size_t k = 0; k < sections.size(); ++k) {
      const Section& s = sections[k];
      if (pos[s.exit] == absent) continue;
      for (std::size_t e = 0; e < n; ++e) {
        bool between = pos[e] != absent && pos[s.entry] != absent && pos[s.entry] < pos[e] && pos[e] < pos[s.exit];
        if (!between) inside[k][e] = 0;
      }
    }
  });

  std::vector<LockSet> out(n);
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Section& s = sections[k];
    for (std::size_t e = 0; e < n; ++e)
      if (inside[k][e] || (s.open && e == s.exit)) out[e].insert(*trace[s.entry].lock());
  }
  return out;
}

bool protected_by_oracle(const Trace& trace, EventId e, const LockId& m, std::size_t cap) {
  std::size_t ei = trace.index_of(e);
  return protection_oracle(trace, cap)[ei].contains(m);
}

LockSetAnalysis::LockSetAnalysis(const Trace& trace) : LockSetAnalysis(trace, must_precede_matrix(trace)) {}

LockSetAnalysis::LockSetAnalysis(const Trace& trace, PrecedenceMatrix precedence)
    : trace_(trace), precedence_(std::move(precedence)) {
  require_well_formed(trace_);
  if (precedence_.size() != trace_.size()) throw std::invalid_argument("precedence matrix size mismatch");

  const auto sections = all_sections(trace_);
  for (const Section& s : sections) {
    const Event& l = trace_[s.entry];
    sections_.push_back(EntryExit{l.id, trace_[s.exit].id, *l.lock(), l.thread, s.open});
  }
  per_thread_ = per_thread_all(trace_, sections);
  trace_based_.assign(trace_.size(), {});
  for (const Section& s : sections) {
    const LockId& m = *trace_[s.entry].lock();
    for (std::size_t e = 0; e < trace_.size(); ++e) {
      if ((s.open && e == s.exit) || (precedence_(s.entry, e) && precedence_(e, s.exit)))
        trace_based_[e].insert(m);
    }
  }
}

std::set<EventId> LockSetAnalysis::critical_section(EventId l) const {
  Section s = section_of(trace_, trace_.index_of(l));
  std::set<EventId> out;
  for (std::size_t e = 0; e < trace_.size(); ++e)
    if ((s.open && e == s.exit) || (precedence_(s.entry, e) && precedence_(e, s.exit))) out.insert(trace_[e].id);
  return out;
}

LockSetReport diff_report(const LockSetAnalysis& analysis) {
  return make_report(analysis.trace(), analysis.per_thread(), analysis.trace_based());
}

LockSetReport diff_report(const Trace& trace) { return diff_report(LockSetAnalysis(trace)); }

LockSetReport diff_report_oracle(const Trace& trace, std::size_t cap) {
  auto trace_based = protection_oracle(trace, cap);
  return make_report(trace, per_thread_all(trace, all_sections(trace)), trace_based);
}

}  // namespace locksem
