#include "smgcheck/qualitative.hpp"

#include <algorithm>

namespace smgcheck {

Predecessors::Predecessors(const Smg& g) {
  const std::size_t n = g.num_states();
  begin_.assign(n + 1, 0);
  for (ChoiceId c = 0; c < g.num_choices(); ++c) {
    for (const auto& t : g.transitions(c)) ++begin_[t.target + 1];
  }
  for (std::size_t s = 0; s < n; ++s) begin_[s + 1] += begin_[s];
  choices_.resize(begin_[n]);
  std::vector<std::size_t> fill(begin_.begin(), begin_.end() - 1);
  for (ChoiceId c = 0; c < g.num_choices(); ++c) {
    for (const auto& t : g.transitions(c)) choices_[fill[t.target]++] = c;
  }
}

namespace {

struct Inner {
  std::vector<char> win;
  std::vector<std::uint32_t> rank;
};

// Least fixpoint inside `zone`: existential states join through one usable
// choice, universal states once every choice is usable. A choice is usable
// when it is eligible and either pre-marked good or has a successor inside.
Inner attract(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
              const std::vector<char>& zone, const std::vector<char>& seeds,
              const std::vector<char>* eligible, const std::vector<char>* pre_good) {
  const std::size_t n = g.num_states();
  Inner out{std::vector<char>(n, 0), std::vector<std::uint32_t>(n, kNoRank)};
  std::vector<std::uint32_t> remaining(n, 0);
  std::vector<char> good(g.num_choices(), 0);
  std::vector<StateId> queue;
  queue.reserve(n);

  auto enter = [&](StateId s, std::uint32_t rank) {
    out.win[s] = 1;
    out.rank[s] = rank;
    queue.push_back(s);
  };

  constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();
  for (StateId s = 0; s < n; ++s) {
    if (!zone[s]) continue;
    remaining[s] = static_cast<std::uint32_t>(g.num_actions(s));
    if (!player[s] && eligible) {
      for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
        if (!(*eligible)[c]) {
          remaining[s] = kNever;
          break;
        }
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (zone[s] && seeds[s]) enter(s, 0);
  }

  auto mark_good = [&](ChoiceId c, std::uint32_t rank) {
    good[c] = 1;
    StateId s = g.state_of(c);
    if (!zone[s] || out.win[s]) return;
    if (player[s]) {
      enter(s, rank);
    } else if (remaining[s] != kNever && --remaining[s] == 0) {
      enter(s, rank);
    }
  };

  if (pre_good) {
    for (ChoiceId c = 0; c < g.num_choices(); ++c) {
      if ((*pre_good)[c] && (!eligible || (*eligible)[c])) mark_good(c, 0);
    }
  }

  for (std::size_t head = 0; head < queue.size(); ++head) {
    StateId t = queue[head];
    std::uint32_t next = out.rank[t] + 1;
    for (ChoiceId c : pred.of(t)) {
      if (good[c] || (eligible && !(*eligible)[c])) continue;
      mark_good(c, next);
    }
  }
  return out;
}

std::vector<char> safe_choices(const Smg& g, const std::vector<char>& zone) {
  std::vector<char> safe(g.num_choices(), 0);
  for (ChoiceId c = 0; c < g.num_choices(); ++c) {
    if (!zone[g.state_of(c)]) continue;
    bool ok = true;
    for (const auto& t : g.transitions(c)) {
      if (!zone[t.target]) {
        ok = false;
        break;
      }
    }
    safe[c] = ok ? 1 : 0;
  }
  return safe;
}

}  // namespace

Attractor constrained_attractor(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                                const std::vector<char>& zone, const std::vector<char>& seeds,
                                const std::vector<char>* eligible, const std::vector<char>* pre_good) {
  auto inner = attract(g, pred, player, zone, seeds, eligible, pre_good);
  return {std::move(inner.win), std::move(inner.rank)};
}

Attractor positive_reach(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                         const std::vector<char>& target, const std::vector<char>* blocked) {
  std::vector<char> zone(g.num_states(), 1);
  if (blocked) {
    for (StateId s = 0; s < g.num_states(); ++s) zone[s] = ((*blocked)[s] && !target[s]) ? 0 : 1;
  }
  auto inner = attract(g, pred, player, zone, target, nullptr, nullptr);
  return {std::move(inner.win), std::move(inner.rank)};
}

AlmostSure almost_sure_reach(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                             const std::vector<char>& target, const std::vector<char>* allowed) {
  const std::size_t n = g.num_states();
  std::vector<char> zone(n, 1);
  AlmostSure out;
  out.removed.assign(n, kNoRank);
  for (std::uint32_t round = 1;; ++round) {
    auto safe = safe_choices(g, zone);
    if (allowed) {
      for (ChoiceId c = 0; c < g.num_choices(); ++c) {
        if (player[g.state_of(c)] && !(*allowed)[c]) safe[c] = 0;
      }
    }
    auto inner = attract(g, pred, player, zone, target, &safe, nullptr);
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (zone[s] && !inner.win[s]) {
        zone[s] = 0;
        out.removed[s] = round;
        changed = true;
      }
    }
    if (!changed) {
      out.win = std::move(inner.win);
      out.rank = std::move(inner.rank);
      return out;
    }
  }
}

namespace {

// One greatest-fixpoint pass for the co-Buchi game inside `zone`: a choice is
// kept when it earns nothing and stays in the current set, or when it stays
// in the zone and may hit `reached`. Removed states of the other side record
// the choice that failed first.
std::vector<char> keep_pass(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                            const std::vector<char>& bad, const std::vector<char>& target,
                            const std::vector<char>& zone, const std::vector<char>& reached,
                            std::vector<ChoiceId>& escape) {
  const std::size_t n = g.num_states();
  std::vector<char> in = zone;
  std::vector<char> ok(g.num_choices(), 0), progress(g.num_choices(), 0);
  std::vector<std::uint32_t> count(n, 0);
  std::vector<StateId> queue;
  auto remove = [&](StateId s, ChoiceId why) {
    in[s] = 0;
    escape[s] = why;
    queue.push_back(s);
  };
  for (StateId s = 0; s < n; ++s) {
    if (!zone[s] || target[s]) continue;
    ChoiceId failed = kNoChoice;
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
      bool inside = true, hits = false;
      for (const auto& t : g.transitions(c)) {
        inside = inside && zone[t.target];
        hits = hits || reached[t.target];
      }
      progress[c] = (inside && hits) ? 1 : 0;
      ok[c] = (progress[c] || (!bad[c] && inside)) ? 1 : 0;
      if (ok[c]) {
        ++count[s];
      } else if (failed == kNoChoice) {
        failed = c;
      }
    }
    if (player[s] ? count[s] == 0 : failed != kNoChoice) remove(s, player[s] ? kNoChoice : failed);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (ChoiceId c : pred.of(queue[head])) {
      StateId s = g.state_of(c);
      if (!in[s] || target[s] || !ok[c] || progress[c]) continue;
      ok[c] = 0;
      if (player[s]) {
        if (--count[s] == 0) remove(s, kNoChoice);
      } else {
        remove(s, c);
      }
    }
  }
  return in;
}

}  // namespace

CoBuchi almost_sure_cobuchi(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                            const std::vector<char>& bad, const std::vector<char>& target) {
  const std::size_t n = g.num_states();
  CoBuchi out;
  out.escape.assign(n, kNoChoice);
  std::vector<char> zone(n, 1);
  std::vector<ChoiceId> escape(n, kNoChoice);
  while (true) {
    std::vector<char> reached = target;
    std::vector<char> kept;
    while (true) {
      kept = keep_pass(g, pred, player, bad, target, zone, reached, escape);
      if (kept == reached) break;
      reached = kept;
    }
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (zone[s] && !kept[s]) {
        out.escape[s] = player[s] ? kNoChoice : escape[s];
        changed = true;
      }
    }
    if (!changed) break;
    zone = std::move(kept);
  }
  out.win = std::move(zone);
  return out;
}

std::vector<char> recurrent_choices(const Smg& g, const std::vector<char>& good,
                                    const std::vector<char>& avoid) {
  const std::size_t n = g.num_states();
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<StateId> stack;
  std::uint32_t counter = 0, components = 0;

  // Iterative Tarjan over the successor relation, skipping avoided states.
  struct Frame {
    StateId s;
    ChoiceId c;
    std::size_t t;
  };
  std::vector<Frame> frames;
  for (StateId root = 0; root < n; ++root) {
    if (avoid[root] || index[root] != kUnvisited) continue;
    frames.push_back({root, g.first_choice(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      bool descended = false;
      while (f.c < g.end_choice(f.s)) {
        auto ts = g.transitions(f.c);
        if (f.t >= ts.size()) {
          ++f.c;
          f.t = 0;
          continue;
        }
        StateId w = ts[f.t++].target;
        if (avoid[w]) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, g.first_choice(w), 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.s] = std::min(low[f.s], index[w]);
      }
      if (descended) continue;
      StateId s = f.s;
      if (low[s] == index[s]) {
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != s);
        ++components;
      }
      frames.pop_back();
      if (!frames.empty()) {
        StateId parent = frames.back().s;
        low[parent] = std::min(low[parent], low[s]);
      }
    }
  }

  std::vector<char> out(g.num_choices(), 0);
  for (ChoiceId c = 0; c < g.num_choices(); ++c) {
    if (!good[c]) continue;
    StateId s = g.state_of(c);
    if (avoid[s]) continue;
    for (const auto& t : g.transitions(c)) {
      if (!avoid[t.target] && comp[t.target] == comp[s]) {
        out[c] = 1;
        break;
      }
    }
  }
  return out;
}

}  // namespace smgcheck
