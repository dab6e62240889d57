#include "locksem/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace locksem {

namespace {

struct OpPrinter {
  std::string operator()(const Fork& f) const { return "fork(" + std::to_string(f.target.value) + ")"; }
  std::string operator()(const Join& j) const { return "join(" + std::to_string(j.target.value) + ")"; }
  std::string operator()(const Lock& l) const { return "lock(" + l.lock.name + ")"; }
  std::string operator()(const Unlock& u) const { return "unlock(" + u.lock.name + ")"; }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_positive(std::string_view s, std::uint32_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && out >= 1;
}

bool valid_lock_name(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' || c == '#';
  });
}

Operation parse_op(std::string_view text, std::size_t line) {
  text = trim(text);
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')')
    throw ParseError(line, "expected <op>(<arg>), got '" + std::string(text) + "'");
  auto keyword = trim(text.substr(0, open));
  auto arg = trim(text.substr(open + 1, text.size() - open - 2));

  if (keyword == "fork" || keyword == "join") {
    std::uint32_t target = 0;
    if (!parse_positive(arg, target))
      throw ParseError(line, "malformed thread id '" + std::string(arg) + "'");
    if (keyword == "fork") return Fork{ThreadId{target}};
    return Join{ThreadId{target}};
  }
  if (keyword == "lock" || keyword == "unlock") {
    if (!valid_lock_name(arg)) throw ParseError(line, "malformed lock name '" + std::string(arg) + "'");
    if (keyword == "lock") return Lock{LockId{std::string(arg)}};
    return Unlock{LockId{std::string(arg)}};
  }
  throw ParseError(line, "unknown operation '" + std::string(keyword) + "'");
}

}  // namespace

std::string to_string(const Operation& op) { return std::visit(OpPrinter{}, op); }

const LockId* Event::lock() const {
  if (auto* l = std::get_if<Lock>(&op)) return &l->lock;
  if (auto* u = std::get_if<Unlock>(&op)) return &u->lock;
  return nullptr;
}

Trace::Trace(std::vector<Event> events) : events_(std::move(events)) {
  index_.reserve(events_.size());
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (!index_.emplace(events_[i].id.value, i).second)
      throw std::invalid_argument("duplicate event id " + std::to_string(events_[i].id.value));
  }
}

std::size_t Trace::index_of(EventId id) const {
  auto it = index_.find(id.value);
  if (it == index_.end()) throw UnknownEvent(id);
  return it->second;
}

Trace Trace::select(std::span<const EventId> ids) const {
  std::vector<Event> out;
  out.reserve(ids.size());
  for (EventId id : ids) out.push_back(event(id));
  return Trace(std::move(out));
}

std::vector<EventId> Trace::ids() const {
  std::vector<EventId> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(e.id);
  return out;
}

std::size_t position(const Trace& trace, EventId id) { return trace.index_of(id) + 1; }

bool trace_order(const Trace& trace, EventId e, EventId f) {
  return trace.index_of(e) < trace.index_of(f);
}

Trace project_thread(const Trace& trace, ThreadId thread) {
  std::vector<Event> out;
  for (const auto& e : trace.events())
    if (e.thread == thread) out.push_back(e);
  return Trace(std::move(out));
}

std::set<ThreadId> threads_of(const Trace& trace) {
  std::set<ThreadId> out;
  for (const auto& e : trace.events()) out.insert(e.thread);
  return out;
}

bool is_prefix(const Trace& prefix, const Trace& trace) {
  if (prefix.size() > trace.size()) return false;
  return std::equal(prefix.events().begin(), prefix.events().end(), trace.events().begin());
}

Trace parse_trace(std::string_view text) {
  std::vector<Event> events;
  std::unordered_map<std::uint32_t, std::size_t> seen;  // id -> line
  std::size_t line_no = 0;
  std::uint32_t ordinal = 0;

  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    ++ordinal;

    // The op itself contains no commas, so split on at most two commas.
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    fields.push_back(line.substr(start));
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, "expected '<thread>, <op>' or '<id>, <thread>, <op>'");

    std::uint32_t id = ordinal;
    if (fields.size() == 3 && !parse_positive(fields[0], id))
      throw ParseError(line_no, "malformed event id '" + std::string(trim(fields[0])) + "'");

    std::uint32_t thread = 0;
    if (!parse_positive(fields[fields.size() - 2], thread))
      throw ParseError(line_no, "malformed thread id '" + std::string(trim(fields[fields.size() - 2])) + "'");

    Operation op = parse_op(fields.back(), line_no);

    if (auto [it, fresh] = seen.emplace(id, line_no); !fresh)
      throw ParseError(line_no, "duplicate event id " + std::to_string(id) + " (first used on line " +
                                    std::to_string(it->second) + ")");
    events.push_back(Event{EventId{id}, ThreadId{thread}, std::move(op)});
  }
  return Trace(std::move(events));
}

std::string serialize(const Trace& trace) {
  std::ostringstream out;
  for (const auto& e : trace.events()) out << e.thread.value << ", " << to_string(e.op) << '\n';
  return out.str();
}

}  // namespace locksem
