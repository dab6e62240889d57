#include "locksem/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "locksem/locksets.hpp"
#include "locksem/reorder.hpp"
#include "locksem/trace.hpp"
#include "locksem/tracegen.hpp"
#include "locksem/wellformed.hpp"

namespace locksem::cli {

namespace {

using nlohmann::json;

class IllFormed : public std::runtime_error {
 public:
  explicit IllFormed(std::vector<WfViolation> v)
      : std::runtime_error("trace is not well formed"), violations(std::move(v)) {}
  std::vector<WfViolation> violations;
};

Trace load(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    buf << in.rdbuf();
  }
  return parse_trace(buf.str());
}

Trace load_well_formed(const std::string& path) {
  Trace t = load(path);
  if (auto v = validate(t); !v.empty()) throw IllFormed(std::move(v));
  return t;
}

json ids_json(std::span<const EventId> ids) {
  json a = json::array();
  for (EventId id : ids) a.push_back(id.value);
  return a;
}

json locks_json(const LockSet& s) {
  json a = json::array();
  for (const auto& m : s) a.push_back(m.name);
  return a;
}

std::string join_ids(std::span<const EventId> ids, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(ids[i].value);
  }
  return out;
}

std::string locks_text(const LockSet& s) {
  std::string out = "{";
  for (auto it = s.begin(); it != s.end(); ++it) {
    if (it != s.begin()) out += ", ";
    out += it->name;
  }
  return out + "}";
}

json violations_json(const std::vector<WfViolation>& violations) {
  json a = json::array();
  for (const auto& v : violations)
    a.push_back({{"condition", to_string(v.condition)}, {"witnesses", ids_json(v.witnesses)}, {"message", v.message}});
  return a;
}

void print_violations(std::ostream& os, const std::vector<WfViolation>& violations) {
  for (const auto& v : violations)
    os << to_string(v.condition) << " [" << join_ids(v.witnesses, ", ") << "]: " << v.message << '\n';
}

// Fixed-width table: one row per event, the op in its thread's column, then
// any extra columns.
void print_table(std::ostream& os, const Trace& trace, const std::vector<std::string>& extra_headers,
                 const std::vector<std::vector<std::string>>& extra_cells) {
  auto threads = threads_of(trace);
  std::vector<ThreadId> cols(threads.begin(), threads.end());
  std::vector<std::string> header{"event"};
  for (ThreadId t : cols) header.push_back("t" + std::to_string(t.value));
  header.insert(header.end(), extra_headers.begin(), extra_headers.end());

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Event& e = trace[i];
    std::vector<std::string> row{"e" + std::to_string(e.id.value)};
    for (ThreadId t : cols) row.push_back(t == e.thread ? to_string(e.op) : "");
    row.insert(row.end(), extra_cells[i].begin(), extra_cells[i].end());
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto emit = [&](const std::vector<std::string>& r) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += c ? " | " : "";
      line += r[c];
      line += std::string(width[c] - r[c].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  };
  emit(header);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) rule += (c ? "-+-" : "") + std::string(width[c], '-');
  os << rule << '\n';
  for (const auto& r : rows) emit(r);
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lock sets, critical sections and trace reorderings for fork/join/lock traces", "locksem"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON instead of text");

  std::string file;

  auto* validate_cmd = app.add_subcommand("validate", "Check the well-formedness conditions");
  validate_cmd->add_option("trace", file, "Trace file ('-' for stdin)")->required();

  auto* exits_cmd = app.add_subcommand("exits", "List entry/exit points of every critical section");
  exits_cmd->add_option("trace", file, "Trace file ('-' for stdin)")->required();

  auto* locksets_cmd = app.add_subcommand("locksets", "Per-thread and trace-based lock sets");
  locksets_cmd->add_option("trace", file, "Trace file ('-' for stdin)")->required();
  std::string mode = "diff";
  locksets_cmd->add_option("--mode", mode, "per-thread, trace or diff")
      ->check(CLI::IsMember({"per-thread", "trace", "diff"}))
      ->capture_default_str();
  bool oracle = false;
  locksets_cmd->add_flag("--oracle", oracle, "Decide trace-based lock sets by enumerating all reorderings");
  std::size_t cap = kDefaultCrpCap;
  locksets_cmd->add_option("--cap", cap, "Enumeration budget for --oracle")->capture_default_str();

  auto* precede_cmd = app.add_subcommand("must-precede", "Does one event precede another in every reordering?");
  precede_cmd->add_option("trace", file, "Trace file ('-' for stdin)")->required();
  std::uint32_t from = 0, to = 0;
  precede_cmd->add_option("--from", from, "Earlier event id")->required()->check(CLI::PositiveNumber);
  precede_cmd->add_option("--to", to, "Later event id")->required()->check(CLI::PositiveNumber);

  auto* crp_cmd = app.add_subcommand("crp", "Enumerate or count correctly reordered prefixes");
  std::string action;
  crp_cmd->add_option("action", action, "enumerate or count")
      ->required()
      ->check(CLI::IsMember({"enumerate", "count"}));
  crp_cmd->add_option("trace", file, "Trace file ('-' for stdin)")->required();
  crp_cmd->add_option("--cap", cap, "Abort after this many prefixes")->capture_default_str();

  auto* gen_cmd = app.add_subcommand("gen", "Write a random well-formed trace");
  GenParams params;
  gen_cmd->add_option("--seed", params.seed)->capture_default_str();
  gen_cmd->add_option("--threads", params.max_threads)->capture_default_str();
  gen_cmd->add_option("--locks", params.max_locks)->capture_default_str();
  gen_cmd->add_option("--events", params.max_events)->capture_default_str();

  std::vector<const char*> args;
  args.reserve(argv.size());
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (validate_cmd->parsed()) {
      auto violations = validate(load(file));
      if (as_json) {
        out << violations_json(violations).dump(2) << '\n';
      } else if (violations.empty()) {
        out << "well-formed\n";
      } else {
        print_violations(out, violations);
      }
      return violations.empty() ? kOk : kIllFormed;
    }

    if (exits_cmd->parsed()) {
      auto pairs = entry_exit_pairs(load_well_formed(file));
      if (as_json) {
        json a = json::array();
        for (const auto& p : pairs)
          a.push_back({{"entry", p.entry.value},
                       {"exit", p.exit.value},
                       {"lock", p.lock.name},
                       {"thread", p.thread.value},
                       {"open", p.open}});
        out << a.dump(2) << '\n';
      } else {
        for (const auto& p : pairs) {
          out << "e" << p.entry.value << " -> e" << p.exit.value << "  " << p.lock.name << "  t" << p.thread.value
              << (p.open ? "  open" : "") << '\n';
        }
      }
      return kOk;
    }

    if (locksets_cmd->parsed()) {
      Trace trace = load_well_formed(file);
      LockSetReport report = oracle ? diff_report_oracle(trace, cap) : diff_report(trace);
      bool want_per_thread = mode != "trace";
      bool want_trace = mode != "per-thread";
      bool want_gained = mode == "diff";
      if (as_json) {
        json a = json::array();
        for (const auto& r : report.rows) {
          json row{{"event_id", r.event.value}, {"thread", r.thread.value}, {"op", to_string(r.op)}};
          if (want_per_thread) row["per_thread"] = locks_json(r.per_thread);
          if (want_trace) row["trace_based"] = locks_json(r.trace_based);
          if (want_gained) row["gained"] = locks_json(r.gained);
          a.push_back(std::move(row));
        }
        out << a.dump(2) << '\n';
      } else {
        std::vector<std::string> headers;
        if (want_per_thread) headers.emplace_back("per-thread");
        if (want_trace) headers.emplace_back("trace-based");
        if (want_gained) headers.emplace_back("gained");
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : report.rows) {
          std::vector<std::string> c;
          if (want_per_thread) c.push_back(locks_text(r.per_thread));
          if (want_trace) c.push_back(locks_text(r.trace_based));
          if (want_gained) c.push_back(r.gained.empty() ? "" : locks_text(r.gained));
          cells.push_back(std::move(c));
        }
        print_table(out, trace, headers, cells);
      }
      return kOk;
    }

    if (precede_cmd->parsed()) {
      Trace trace = load_well_formed(file);
      auto witness = must_precede_counterexample(trace, EventId{from}, EventId{to});
      if (as_json) {
        json j{{"from", from}, {"to", to}, {"must_precede", !witness}};
        j["witness"] = witness ? ids_json(*witness) : json(nullptr);
        out << j.dump(2) << '\n';
      } else {
        out << (witness ? "false" : "true") << '\n';
        if (witness) out << "witness: " << join_ids(*witness, ", ") << '\n';
      }
      return kOk;
    }

    if (crp_cmd->parsed()) {
      Trace trace = load_well_formed(file);
      if (action == "count") {
        std::size_t n = count_crps(trace, cap);
        if (as_json) {
          out << json{{"count", n}}.dump(2) << '\n';
        } else {
          out << n << '\n';
        }
      } else if (as_json) {
        json a = json::array();
        for (const auto& p : enumerate_crps(trace, cap)) a.push_back(ids_json(p));
        out << a.dump(2) << '\n';
      } else {
        // Stream; a CapExceeded midway still leaves the emitted lines valid.
        for_each_crp(trace, cap, [&](std::span<const EventId> p) { out << join_ids(p, ",") << '\n'; });
      }
      return kOk;
    }

    if (gen_cmd->parsed()) {
      out << serialize(generate(params));
      return kOk;
    }
  } catch (const IllFormed& e) {
    err << "error: " << e.what() << '\n';
    print_violations(err, e.violations);
    return kIllFormed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace locksem::cli
