// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Sweeps draw from a fixed generator schedule so runs are
// reproducible.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "locksem/locksets.hpp"
#include "locksem/reorder.hpp"
#include "locksem/tracegen.hpp"
#include "locksem/wellformed.hpp"
#include "support.hpp"

using namespace locksem;
using namespace locksem::testing;

namespace {

using Clock = std::chrono::steady_clock;

// 2,000 traces of 4..12 events over 2..4 threads and 1..3 locks.
constexpr std::uint64_t kSweepSize = 2000;
constexpr std::size_t kMaxSweepEvents = 12;

GenParams sweep_params(std::uint64_t i) {
  return GenParams{i, 2 + i % 3, 1 + (i / 3) % 3, 4 + i % (kMaxSweepEvents - 3)};
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (notes.size() < 12) notes.push_back(what);
    }
  }
};

int failures = 0;

void report(const char* id, const char* title, const std::function<void(Outcome&)>& body,
            double budget_seconds) {
  Outcome o;
  auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  char budget[64];
  std::snprintf(budget, sizeof budget, "%.2fs (limit %.0fs)", secs, budget_seconds);
  o.require(secs < budget_seconds, std::string("over time budget: ") + budget);
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << title << "  [" << budget << "]\n";
  for (const auto& n : o.notes) std::cout << "       - " << n << '\n';
  if (!o.pass) ++failures;
}

std::string seq_text(const Trace& t) {
  std::string s = serialize(t);
  for (auto& c : s)
    if (c == '\n') c = ';';
  return s;
}

std::string lockset_text(const LockSet& s) {
  std::string out = "{";
  for (const auto& m : s) out += (out.size() > 1 ? "," : "") + m.name;
  return out + "}";
}

void figure_golden(Outcome& o) {
  Trace t1 = fixture("t1.trace");
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> exits{{2, 5}, {3, 4}, {6, 11}, {8, 9}};
  for (auto [l, x] : exits) {
    auto got = exit_point(t1, E(l)).value;
    o.require(got == x, "exit_point(e" + std::to_string(l) + ") = e" + std::to_string(got) + ", expected e" +
                            std::to_string(x));
  }
  o.require(per_thread_lockset(t1, E(3)) == locks({"m1"}), "per_thread_lockset(e3) != {m1}");
  o.require(per_thread_lockset(t1, E(8)) == locks({}), "per_thread_lockset(e8) != {}");

  LockSet ls8 = lockset(t1, E(8));
  o.require(ls8.contains(LockId{"m1"}), "m1 not in lockset(e8)");
  auto oracle = protection_oracle(t1);
  o.require(ls8 == oracle[t1.index_of(E(8))],
            "lockset(e8) = " + lockset_text(ls8) + " but oracle says " + lockset_text(oracle[t1.index_of(E(8))]));
  o.require(ls8 == locks({"m1"}), "lockset(e8) != {m1}");

  auto rep = diff_report(t1);
  for (std::uint32_t e : {7u, 8u, 10u}) {
    const auto& row = rep.rows[t1.index_of(E(e))];
    o.require(row.gained == locks({"m1"}), "diff_report: e" + std::to_string(e) + " gained " +
                                               lockset_text(row.gained) + " (per-thread " +
                                               lockset_text(row.per_thread) + ", trace-based " +
                                               lockset_text(row.trace_based) + "), expected {m1}");
  }
}

void example_classification(Outcome& o) {
  Trace t1 = fixture("t1.trace");
  o.require(is_crp(fixture("t2.trace").ids(), t1), "T2 not in crp(T1)");
  o.require(is_crp(fixture("t3.trace").ids(), t1), "T3 not in crp(T1)");
  o.require(!is_crp(fixture("t4.trace").ids(), t1), "T4 in crp(T1)");

  auto v5 = validate(fixture("t5.trace"));
  o.require(v5.size() == 1 && v5[0].condition == WfCondition::Acq, "T5 not reported as exactly WF-Acq");
  auto v6 = validate(fixture("t6.trace"));
  o.require(v6.size() == 1 && v6[0].condition == WfCondition::Fork2, "T6 not reported as exactly WF-Fork2");
  for (const char* name : {"t1.trace", "t2.trace", "t3.trace", "t4.trace"})
    o.require(validate(fixture(name)).empty(), std::string(name) + " reported ill formed");
}

void oracle_equivalence(Outcome& o) {
  std::size_t precede_bad = 0, complete_bad = 0, per_thread_bad = 0, pairs = 0, traces = 0;
  for (std::uint64_t i = 1; i <= kSweepSize; ++i) {
    Trace t = generate(sweep_params(i));
    if (t.size() > kMaxSweepEvents || !is_well_formed(t)) {
      o.require(false, "generator produced an unusable trace at seed " + std::to_string(i));
      continue;
    }
    ++traces;
    auto cr = all_crps(t);

    // (a) reachability search against the definition over enumerated prefixes
    for (const auto& e : t.events())
      for (const auto& f : t.events()) {
        ++pairs;
        bool def = definitional_must_precede(cr, e.id.value, f.id.value);
        if (must_precede(t, e.id, f.id) != def) {
          ++precede_bad;
          o.require(false, "(a) seed " + std::to_string(i) + ": must_precede(e" + std::to_string(e.id.value) +
                               ", e" + std::to_string(f.id.value) + ") != definition");
        }
      }

    LockSetAnalysis analysis(t);
    auto protection = protection_oracle(t);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::uint32_t e = t[k].id.value;
      LockSet direct = lockset(t, t[k].id);
      if (direct != analysis.trace_based()[k])
        o.require(false, "seed " + std::to_string(i) + ": lockset(e" + std::to_string(e) + ") query != analysis");

      // (b) m in lockset iff protected, both directions
      for (const char* name : {"m1", "m2", "m3"}) {
        LockId m{name};
        bool in_set = direct.contains(m);
        bool prot = protection[k].contains(m);
        bool prot_indep = protected_by(t, cr, e, name);
        if (prot != prot_indep)
          o.require(false, "seed " + std::to_string(i) + ": protection oracles disagree at e" + std::to_string(e));
        if (in_set != prot) {
          ++complete_bad;
          o.require(false, "(b) seed " + std::to_string(i) + ": e" + std::to_string(e) + " " + name +
                               (prot ? " protected but not in lockset" : " in lockset but not protected") +
                               "; trace: " + seq_text(t));
        }
      }
      // (c) per-thread members are protected
      for (const auto& m : per_thread_lockset(t, t[k].id)) {
        if (!protection[k].contains(m)) {
          ++per_thread_bad;
          o.require(false, "(c) seed " + std::to_string(i) + ": e" + std::to_string(e) + " " + m.name);
        }
      }
    }
  }
  o.require(traces >= 500, "fewer than 500 traces checked");
  std::ostringstream s;
  s << traces << " traces, " << pairs << " event pairs; discrepancies: (a) " << precede_bad << ", (b) "
    << complete_bad << ", (c) " << per_thread_bad;
  o.notes.insert(o.notes.begin(), s.str());
}

void exit_stability(Outcome& o) {
  std::size_t traces = 0, checks = 0;
  for (std::uint64_t i = 1; i <= kSweepSize; ++i) {
    Trace t = generate(sweep_params(i));
    if (entry_exit_pairs(t).empty()) continue;
    ++traces;
    auto cr = all_crps(t);
    for (const auto& s : entry_exit_pairs(t)) {
      for (const auto& p : cr) {
        if (std::find(p.begin(), p.end(), s.exit.value) == p.end()) continue;
        std::vector<EventId> ids;
        for (auto v : p) ids.push_back(EventId{v});
        ++checks;
        EventId moved = exit_point(t.select(ids), s.entry);
        o.require(moved == s.exit, "seed " + std::to_string(i) + ": exit of e" + std::to_string(s.entry.value) +
                                       " moved to e" + std::to_string(moved.value));
      }
    }
  }
  o.require(traces >= 100, "fewer than 100 traces with lock events");
  o.notes.insert(o.notes.begin(),
                 std::to_string(traces) + " traces, " + std::to_string(checks) + " (section, prefix) checks");
}

void subset_corollary(Outcome& o) {
  std::size_t events = 0;
  for (std::uint64_t i = 1; i <= kSweepSize; ++i) {
    Trace t = generate(sweep_params(i));
    LockSetAnalysis a(t);
    for (std::size_t k = 0; k < t.size(); ++k) {
      ++events;
      const auto& pt = a.per_thread()[k];
      const auto& tb = a.trace_based()[k];
      o.require(std::includes(tb.begin(), tb.end(), pt.begin(), pt.end()),
                "seed " + std::to_string(i) + ": per-thread set of e" + std::to_string(t[k].id.value) +
                    " not contained in the trace-based set");
    }
  }
  Trace t1 = fixture("t1.trace");
  LockSet pt = per_thread_lockset(t1, E(8)), tb = lockset(t1, E(8));
  o.require(pt != tb && std::includes(tb.begin(), tb.end(), pt.begin(), pt.end()), "not strict on T1 at e8");
  o.notes.insert(o.notes.begin(), std::to_string(events) + " events checked");
}

void structural(Outcome& o) {
  std::size_t traces = 0;
  for (std::uint64_t i = 1; i <= kSweepSize; ++i) {
    Trace t = generate(sweep_params(i));
    ++traces;
    const std::string tag = "seed " + std::to_string(i) + ": ";

    auto cr = all_crps(t);
    std::set<IdSeq> members(cr.begin(), cr.end());
    for (const auto& p : cr)
      for (std::size_t k = 0; k < p.size(); ++k)
        if (!members.contains(IdSeq(p.begin(), p.begin() + static_cast<long>(k))))
          o.require(false, tag + "crp not prefix closed");

    auto ids = t.ids();
    for (std::size_t k = 0; k <= ids.size(); ++k)
      if (!validate(t.select(std::span(ids).first(k))).empty()) o.require(false, tag + "WF not prefix closed");

    auto mp = must_precede_matrix(t);
    const std::size_t n = t.size();
    for (std::size_t a = 0; a < n; ++a) {
      if (mp(a, a)) o.require(false, tag + "must-precede reflexive");
      for (std::size_t b = 0; b < n; ++b) {
        if (a < b && t[a].thread == t[b].thread && !mp(a, b)) o.require(false, tag + "program order not implied");
        if (!mp(a, b)) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (mp(b, c) && !mp(a, c)) o.require(false, tag + "must-precede not transitive");
      }
    }

    Trace back = parse_trace(serialize(t));
    bool same = back.size() == t.size();
    for (std::size_t k = 0; same && k < t.size(); ++k)
      same = back[k].thread == t[k].thread && back[k].op == t[k].op;
    o.require(same, tag + "serialize/parse round trip differs");
  }
  o.notes.insert(o.notes.begin(), std::to_string(traces) + " traces");
}

}  // namespace

int main() {
  report("AC1", "Fig. 2 golden: exits, per-thread and trace-based lock sets, diff", figure_golden, 1.0);
  report("AC2", "Example classification: crp membership and WF verdicts", example_classification, 1.0);
  report("AC3", "Oracle equivalence: must-precede, lock set completeness, per-thread soundness",
         oracle_equivalence, 300.0);
  report("AC4", "Exit point stability under reordering", exit_stability, 300.0);
  report("AC5", "Per-thread lock set is a subset of the trace-based one", subset_corollary, 300.0);
  report("AC6", "Structural properties over the generator sweep", structural, 300.0);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
