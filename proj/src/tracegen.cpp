#include "locksem/tracegen.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <tuple>

namespace locksem {

namespace {

struct GenThread {
  ThreadId id;
  bool joined = false;
  bool may_end_open = false;
  std::size_t events = 0;
  std::vector<std::size_t> held;
};

enum class Action { Lock, Unlock, Fork, Join };

}  // namespace

Trace generate(GenParams params) {
  params.max_threads = std::clamp<std::size_t>(params.max_threads, 1, 1'000);
  params.max_locks = std::min<std::size_t>(params.max_locks, 1'000);
  params.max_events = std::min<std::size_t>(params.max_events, 1'000'000);

  std::mt19937_64 rng(params.seed);
  std::bernoulli_distribution open_coin(kOpenSectionRate);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  std::vector<GenThread> threads{GenThread{ThreadId{1}, false, open_coin(rng), 0, {}}};
  std::vector<std::optional<std::size_t>> owner(params.max_locks);  // lock -> thread index
  std::vector<Event> events;

  auto lock_name = [](std::size_t m) { return LockId{"m" + std::to_string(m + 1)}; };

  while (events.size() < params.max_events) {
    // (thread index, action, argument) triples that keep the trace well formed.
    std::vector<std::tuple<std::size_t, Action, std::size_t>> moves;
    for (std::size_t t = 0; t < threads.size(); ++t) {
      const GenThread& th = threads[t];
      if (th.joined) continue;
      for (std::size_t m = 0; m < owner.size(); ++m) {
        if (!owner[m]) moves.emplace_back(t, Action::Lock, m);
      }
      for (std::size_t m : th.held) moves.emplace_back(t, Action::Unlock, m);
      if (threads.size() < params.max_threads) moves.emplace_back(t, Action::Fork, threads.size());
      for (std::size_t u = 0; u < threads.size(); ++u) {
        const GenThread& other = threads[u];
        if (u == t || other.joined || other.events == 0) continue;
        if (!other.held.empty() && !other.may_end_open) continue;
        moves.emplace_back(t, Action::Join, u);
      }
    }
    if (moves.empty()) break;

    auto [t, action, arg] = moves[pick(moves.size())];
    GenThread& th = threads[t];
    Event e{EventId{static_cast<std::uint32_t>(events.size() + 1)}, th.id, Fork{}};
    switch (action) {
      case Action::Lock:
        e.op = Lock{lock_name(arg)};
        owner[arg] = t;
        th.held.push_back(arg);
        break;
      case Action::Unlock:
        e.op = Unlock{lock_name(arg)};
        owner[arg].reset();
        std::erase(th.held, arg);
        break;
      case Action::Fork: {
        ThreadId child{static_cast<std::uint32_t>(arg + 1)};
        e.op = Fork{child};
        // Push after building the event: `th` may dangle once threads grows.
        threads.push_back(GenThread{child, false, open_coin(rng), 0, {}});
        break;
      }
      case Action::Join:
        e.op = Join{threads[arg].id};
        threads[arg].joined = true;
        break;
    }
    ++threads[t].events;
    events.push_back(std::move(e));
  }
  return Trace(std::move(events));
}

}  // namespace locksem
