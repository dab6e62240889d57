#include "locksem/wellformed.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

namespace locksem {

std::string_view to_string(WfCondition c) {
  switch (c) {
    case WfCondition::Acq: return "WF-Acq";
    case WfCondition::Rel: return "WF-Rel";
    case WfCondition::Fork1: return "WF-Fork1";
    case WfCondition::Fork2: return "WF-Fork2";
    case WfCondition::Join1: return "WF-Join1";
    case WfCondition::Join2: return "WF-Join2";
  }
  return "?";
}

namespace {

std::string describe(const Event& e) {
  return "e" + std::to_string(e.id.value) + " (t" + std::to_string(e.thread.value) + ", " + to_string(e.op) + ")";
}

class Checker {
 public:
  explicit Checker(const Trace& trace) : trace_(trace) {}

  std::vector<WfViolation> run() {
    check_locks();
    check_forks();
    check_joins();
    std::stable_sort(out_.begin(), out_.end(), [&](const WfViolation& a, const WfViolation& b) {
      auto pa = trace_.index_of(a.witnesses.front());
      auto pb = trace_.index_of(b.witnesses.front());
      if (pa != pb) return pa < pb;
      return to_string(a.condition) < to_string(b.condition);
    });
    return std::move(out_);
  }

 private:
  void report(WfCondition c, std::vector<EventId> witnesses, std::string message) {
    out_.push_back(WfViolation{c, std::move(witnesses), std::move(message)});
  }

  void check_locks() {
    struct LockState {
      std::optional<std::size_t> last_lock;
      bool released_by_acquirer = false;
      std::optional<std::size_t> last_unlock;
    };
    std::map<LockId, LockState> locks;
    std::map<std::pair<ThreadId, LockId>, std::size_t> last_lock_by_thread;

    for (std::size_t i = 0; i < trace_.size(); ++i) {
      const Event& e = trace_[i];
      if (auto* l = std::get_if<Lock>(&e.op)) {
        auto& st = locks[l->lock];
        if (st.last_lock && !st.released_by_acquirer) {
          const Event& prev = trace_[*st.last_lock];
          report(WfCondition::Acq, {prev.id, e.id},
                 describe(e) + " acquires " + l->lock.name + " still held since " + describe(prev));
        }
        st.last_lock = i;
        st.released_by_acquirer = false;
        last_lock_by_thread[{e.thread, l->lock}] = i;
      } else if (auto* u = std::get_if<Unlock>(&e.op)) {
        auto& st = locks[u->lock];
        auto it = last_lock_by_thread.find({e.thread, u->lock});
        if (it == last_lock_by_thread.end()) {
          report(WfCondition::Rel, {e.id},
                 describe(e) + " releases " + u->lock.name + " which its thread never acquired");
        } else if (st.last_unlock && *st.last_unlock > it->second) {
          const Event& acq = trace_[it->second];
          const Event& rel = trace_[*st.last_unlock];
          report(WfCondition::Rel, {acq.id, rel.id, e.id},
                 describe(e) + " releases " + u->lock.name + " already released by " + describe(rel));
        }
        if (st.last_lock && trace_[*st.last_lock].thread == e.thread) st.released_by_acquirer = true;
        st.last_unlock = i;
      }
    }
  }

  void check_forks() {
    std::map<ThreadId, std::size_t> first_fork;
    for (std::size_t i = 0; i < trace_.size(); ++i) {
      const Event& e = trace_[i];
      auto* f = std::get_if<Fork>(&e.op);
      if (!f) continue;
      if (f->target == ThreadId{1}) report(WfCondition::Fork1, {e.id}, describe(e) + " forks the main thread");
      if (auto [it, fresh] = first_fork.emplace(f->target, i); !fresh) {
        const Event& prev = trace_[it->second];
        report(WfCondition::Fork1, {prev.id, e.id},
               "thread " + std::to_string(f->target.value) + " forked twice, by " + describe(prev) + " and " +
                   describe(e));
      }
    }

    std::map<ThreadId, std::vector<EventId>> unforked;
    for (std::size_t i = 0; i < trace_.size(); ++i) {
      const Event& e = trace_[i];
      if (e.thread == ThreadId{1}) continue;
      auto it = first_fork.find(e.thread);
      if (it == first_fork.end() || it->second >= i) unforked[e.thread].push_back(e.id);
    }
    for (auto& [thread, ids] : unforked) {
      const Event& first = trace_.event(ids.front());
      report(WfCondition::Fork2, std::move(ids),
             "thread " + std::to_string(thread.value) + " runs " + describe(first) + " before any fork(" +
                 std::to_string(thread.value) + ")");
    }
  }

  void check_joins() {
    std::map<ThreadId, std::vector<std::size_t>> events_of;
    for (std::size_t i = 0; i < trace_.size(); ++i) events_of[trace_[i].thread].push_back(i);

    for (std::size_t i = 0; i < trace_.size(); ++i) {
      const Event& e = trace_[i];
      auto* j = std::get_if<Join>(&e.op);
      if (!j) continue;
      if (j->target == e.thread) {
        report(WfCondition::Join1, {e.id}, describe(e) + " joins its own thread");
      } else if (!events_of.contains(j->target)) {
        report(WfCondition::Join1, {e.id},
               describe(e) + " joins thread " + std::to_string(j->target.value) + " which has no events");
      }
      std::vector<EventId> late{e.id};
      if (auto it = events_of.find(j->target); it != events_of.end()) {
        for (std::size_t k : it->second)
          if (k > i) late.push_back(trace_[k].id);
      }
      if (late.size() > 1) {
        report(WfCondition::Join2, std::move(late),
               describe(e) + " precedes later events of thread " + std::to_string(j->target.value));
      }
    }
  }

  const Trace& trace_;
  std::vector<WfViolation> out_;
};

}  // namespace

std::vector<WfViolation> validate(const Trace& trace) { return Checker(trace).run(); }

void require_well_formed(const Trace& trace) {
  auto violations = validate(trace);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "trace is not well formed:";
  for (const auto& v : violations) msg << "\n  " << to_string(v.condition) << ": " << v.message;
  throw std::invalid_argument(msg.str());
}

}  // namespace locksem
