#include "smgcheck/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "smgcheck/error.hpp"

namespace smgcheck::oracle {

namespace {

using boost::multiprecision::cpp_rational;

struct Chain {
  std::size_t n = 0;
  std::vector<std::vector<Transition>> succ;
  std::vector<double> reward;
  std::vector<char> target;
};

Chain make_chain(const Smg& g, const Profile& profile, const Objective& objective) {
  if (profile.size() != g.num_states()) throw Error(ErrorKind::BadParameter, "profile size mismatch");
  if (objective.target.empty()) throw Error(ErrorKind::BadTarget, "empty target set");
  Chain ch;
  ch.n = g.num_states();
  ch.target = state_mask(ch.n, objective.target);
  ch.succ.resize(ch.n);
  ch.reward.assign(ch.n, 0.0);
  const RewardStructure* r = nullptr;
  if (objective.reward) {
    r = g.reward(*objective.reward);
    if (!r) throw Error(ErrorKind::UnknownReward, "'" + *objective.reward + "'");
  }
  for (StateId s = 0; s < ch.n; ++s) {
    if (profile[s] >= g.num_actions(s)) throw Error(ErrorKind::DisabledAction, "state " + std::to_string(s));
    ChoiceId c = g.choice(s, profile[s]);
    auto ts = g.transitions(c);
    ch.succ[s].assign(ts.begin(), ts.end());
    if (r) ch.reward[s] = r->at(c);
  }
  return ch;
}

// Backward closure of `seed` along edges that leave non-target states.
std::vector<char> can_reach(const Chain& ch, const std::vector<char>& seed) {
  std::vector<std::vector<StateId>> pred(ch.n);
  for (StateId s = 0; s < ch.n; ++s) {
    if (ch.target[s]) continue;
    for (const auto& t : ch.succ[s]) pred[t.target].push_back(s);
  }
  std::vector<char> out = seed;
  std::vector<StateId> stack;
  for (StateId s = 0; s < ch.n; ++s) {
    if (seed[s]) stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId t = stack.back();
    stack.pop_back();
    for (StateId s : pred[t]) {
      if (!out[s]) {
        out[s] = 1;
        stack.push_back(s);
      }
    }
  }
  return out;
}

// Bottom SCCs of the chain with target states removed (targets are absorbing
// and never part of a returned component). Returns component id or -1.
std::vector<int> bottom_components(const Chain& ch) {
  const std::size_t n = ch.n;
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<StateId> stack;
  int counter = 0, comps = 0;
  auto edges = [&](StateId s) -> const std::vector<Transition>& {
    static const std::vector<Transition> none;
    return ch.target[s] ? none : ch.succ[s];
  };
  struct Frame {
    StateId s;
    std::size_t i;
  };
  for (StateId root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& es = edges(f.s);
      if (f.i < es.size()) {
        StateId w = es[f.i++].target;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.s] = std::min(low[f.s], index[w]);
        }
        continue;
      }
      StateId s = f.s;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().s] = std::min(low[frames.back().s], low[s]);
      if (low[s] == index[s]) {
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
        } while (w != s);
        ++comps;
      }
    }
  }
  std::vector<char> bottom(static_cast<std::size_t>(comps), 1);
  for (StateId s = 0; s < n; ++s) {
    if (ch.target[s]) {
      bottom[comp[s]] = 0;
      continue;
    }
    for (const auto& t : ch.succ[s]) {
      if (comp[t.target] != comp[s]) bottom[comp[s]] = 0;
    }
  }
  std::vector<int> out(n, -1);
  for (StateId s = 0; s < n; ++s) {
    if (bottom[comp[s]]) out[s] = comp[s];
  }
  return out;
}

// Solves x(u) = rhs(u) + sum_{v in U} P(u,v) x(v) for the unknowns U; values
// of states outside U are folded into rhs by the caller.
template <typename T>
std::vector<T> solve(const Chain& ch, const std::vector<StateId>& unknowns, std::vector<T> rhs) {
  const std::size_t m = unknowns.size();
  std::vector<int> pos(ch.n, -1);
  for (std::size_t i = 0; i < m; ++i) pos[unknowns[i]] = static_cast<int>(i);
  std::vector<std::vector<T>> a(m, std::vector<T>(m, T(0)));
  for (std::size_t i = 0; i < m; ++i) {
    a[i][i] = T(1);
    for (const auto& t : ch.succ[unknowns[i]]) {
      if (pos[t.target] >= 0) a[i][pos[t.target]] -= T(t.probability);
    }
  }
  const auto a0 = a;
  const auto b0 = rhs;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    if constexpr (std::is_floating_point_v<T>) {
      for (std::size_t r = col + 1; r < m; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      }
    } else {
      while (pivot < m && a[pivot][col] == 0) ++pivot;
    }
    if (pivot == m || a[pivot][col] == T(0)) throw Error(ErrorKind::SingularSystem, "chain system is singular");
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == T(0)) continue;
      T factor = a[r][col] / a[col][col];
      for (std::size_t k = col; k < m; ++k) a[r][k] -= factor * a[col][k];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<T> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = rhs[i] / a[i][i];
  if constexpr (std::is_floating_point_v<T>) {
    T scale = 1, residual = 0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max({scale, std::abs(x[i]), std::abs(b0[i])});
    for (std::size_t i = 0; i < m; ++i) {
      T sum = -b0[i];
      for (std::size_t j = 0; j < m; ++j) sum += a0[i][j] * x[j];
      residual = std::max(residual, std::abs(sum));
    }
    if (!(residual < 1e-10 * scale)) throw Error(ErrorKind::SingularSystem, "residual check failed");
  }
  return x;
}

// Reach probabilities, exact where possible; rewards follow the same path.
template <typename T>
struct Evaluator {
  const Chain& ch;

  std::vector<T> reach(const std::vector<char>& positive) const {
    std::vector<T> p(ch.n, T(0));
    std::vector<StateId> unknowns;
    for (StateId s = 0; s < ch.n; ++s) {
      if (ch.target[s]) {
        p[s] = T(1);
      } else if (positive[s]) {
        unknowns.push_back(s);
      }
    }
    std::vector<T> rhs(unknowns.size(), T(0));
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
      for (const auto& t : ch.succ[unknowns[i]]) {
        if (ch.target[t.target]) rhs[i] += T(t.probability);
      }
    }
    auto x = solve<T>(ch, unknowns, std::move(rhs));
    for (std::size_t i = 0; i < unknowns.size(); ++i) p[unknowns[i]] = x[i];
    return p;
  }

  // x = weight(s) + sum P x over the unknowns; everything else is zero.
  std::vector<T> accumulate(const std::vector<StateId>& unknowns, const std::vector<T>& weight) const {
    std::vector<T> out(ch.n, T(0));
    std::vector<T> rhs(unknowns.size());
    for (std::size_t i = 0; i < unknowns.size(); ++i) rhs[i] = weight[unknowns[i]];
    auto x = solve<T>(ch, unknowns, std::move(rhs));
    for (std::size_t i = 0; i < unknowns.size(); ++i) out[unknowns[i]] = x[i];
    return out;
  }
};

template <typename T>
double to_double(const T& x) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

template <typename T>
ValueVector evaluate(const Chain& ch, const Objective& objective) {
  Evaluator<T> ev{ch};
  const std::size_t n = ch.n;
  const auto positive = can_reach(ch, ch.target);
  ValueVector out;
  if (!objective.reward) {
    auto p = ev.reach(positive);
    out.kind = ValueKind::Probability;
    out.values.resize(n);
    for (StateId s = 0; s < n; ++s) out.values[s] = to_double(p[s]);
    return out;
  }
  out.kind = ValueKind::Reward;
  out.values.assign(n, 0.0);
  std::vector<T> r(n);
  for (StateId s = 0; s < n; ++s) r[s] = T(ch.reward[s]);

  switch (objective.star) {
    case Star::Infinite: {
      // Reach probability 1 iff no state that misses the target is reachable.
      std::vector<char> miss(n);
      for (StateId s = 0; s < n; ++s) miss[s] = positive[s] ? 0 : 1;
      auto bad = can_reach(ch, miss);
      std::vector<StateId> unknowns;
      for (StateId s = 0; s < n; ++s) {
        if (!ch.target[s] && !bad[s]) unknowns.push_back(s);
      }
      auto x = ev.accumulate(unknowns, r);
      for (StateId s = 0; s < n; ++s) {
        out.values[s] = ch.target[s] ? 0.0 : bad[s] ? kInfinity : to_double(x[s]);
      }
      break;
    }
    case Star::Cumulative: {
      auto bottom = bottom_components(ch);
      std::vector<char> divergent(n, 0);
      std::vector<char> positive_component;
      for (StateId s = 0; s < n; ++s) {
        if (bottom[s] < 0) continue;
        if (positive_component.size() <= static_cast<std::size_t>(bottom[s])) {
          positive_component.resize(bottom[s] + 1, 0);
        }
        if (ch.reward[s] > 0.0) positive_component[bottom[s]] = 1;
      }
      for (StateId s = 0; s < n; ++s) {
        if (bottom[s] >= 0 && positive_component[bottom[s]]) divergent[s] = 1;
      }
      auto inf = can_reach(ch, divergent);
      std::vector<StateId> unknowns;
      for (StateId s = 0; s < n; ++s) {
        if (!ch.target[s] && !inf[s] && bottom[s] < 0) unknowns.push_back(s);
      }
      auto x = ev.accumulate(unknowns, r);
      for (StateId s = 0; s < n; ++s) {
        out.values[s] = ch.target[s] ? 0.0 : inf[s] ? kInfinity : to_double(x[s]);
      }
      break;
    }
    case Star::Zero: {
      auto p = ev.reach(positive);
      std::vector<StateId> unknowns;
      std::vector<T> weight(n, T(0));
      for (StateId s = 0; s < n; ++s) {
        if (!ch.target[s] && positive[s]) {
          unknowns.push_back(s);
          weight[s] = r[s] * p[s];
        }
      }
      auto x = ev.accumulate(unknowns, weight);
      for (StateId s = 0; s < n; ++s) out.values[s] = to_double(x[s]);
      break;
    }
  }
  return out;
}

// Odometer over the action vectors of a subset of states.
class Odometer {
 public:
  Odometer(const Smg& g, std::vector<StateId> states, Profile& profile)
      : g_(g), states_(std::move(states)), profile_(profile) {
    for (StateId s : states_) profile_[s] = 0;
  }
  bool next() {
    for (std::size_t i = states_.size(); i-- > 0;) {
      StateId s = states_[i];
      if (++profile_[s] < g_.num_actions(s)) return true;
      profile_[s] = 0;
    }
    return false;
  }

 private:
  const Smg& g_;
  std::vector<StateId> states_;
  Profile& profile_;
};

std::pair<std::vector<StateId>, std::vector<StateId>> sides(const Smg& g, const Coalition& coalition) {
  std::pair<std::vector<StateId>, std::vector<StateId>> out;
  auto mask = coalition_mask(g, coalition);
  for (StateId s = 0; s < g.num_states(); ++s) (mask[s] ? out.first : out.second).push_back(s);
  return out;
}

void check_cap(const Smg& g, std::size_t cap) {
  std::size_t total = count_profiles(g);
  if (total > cap) {
    throw Error(ErrorKind::TooLarge,
                std::to_string(total) + " profiles exceed the cap of " + std::to_string(cap));
  }
}

}  // namespace

std::size_t count_profiles(const Smg& g) {
  std::size_t total = 1;
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::size_t a = g.num_actions(s);
    if (total > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    total *= a;
  }
  return total;
}

std::vector<std::pair<Strategy, Strategy>> enumerate_profiles(const Smg& g, const Coalition& coalition,
                                                              std::size_t cap) {
  check_cap(g, cap);
  auto [mine, theirs] = sides(g, coalition);
  Coalition others;
  for (PlayerId p = 0; p < g.num_players(); ++p) {
    if (!contains(coalition, p)) others.push_back(p);
  }
  Profile profile(g.num_states(), 0);
  std::vector<std::pair<Strategy, Strategy>> out;
  Odometer outer(g, mine, profile);
  do {
    Strategy sigma = Strategy::memoryless(coalition, g.num_states());
    for (StateId s : mine) sigma.set(s, profile[s]);
    Odometer inner(g, theirs, profile);
    do {
      Strategy tau = Strategy::memoryless(others, g.num_states());
      for (StateId s : theirs) tau.set(s, profile[s]);
      out.emplace_back(sigma, std::move(tau));
    } while (inner.next());
  } while (outer.next());
  return out;
}

Profile combine(const Strategy& a, const Strategy& b) {
  if (a.num_states() != b.num_states()) throw Error(ErrorKind::BadParameter, "strategy sizes differ");
  Profile out(a.num_states(), 0);
  for (StateId s = 0; s < out.size(); ++s) {
    auto x = a.choice(s);
    if (!x) x = b.choice(s);
    if (!x) throw Error(ErrorKind::UndefinedChoice, "state " + std::to_string(s) + " has no choice");
    out[s] = *x;
  }
  return out;
}

ValueVector evaluate_chain(const Smg& g, const Profile& profile, const Objective& objective,
                           std::size_t exact_limit) {
  Chain ch = make_chain(g, profile, objective);
  if (ch.n <= exact_limit) return evaluate<cpp_rational>(ch, objective);
  return evaluate<long double>(ch, objective);
}

ValueVector brute_force_value(const Smg& g, const Coalition& coalition, const Objective& objective,
                              Optimum optimum, std::size_t cap) {
  check_cap(g, cap);
  auto [mine, theirs] = sides(g, coalition);
  const bool maximize = optimum == Optimum::Max;
  const std::size_t n = g.num_states();
  ValueVector best;
  best.values.assign(n, maximize ? -kInfinity : kInfinity);
  Profile profile(n, 0);
  Odometer outer(g, mine, profile);
  do {
    std::vector<double> worst(n, maximize ? kInfinity : -kInfinity);
    Odometer inner(g, theirs, profile);
    do {
      ValueVector v = evaluate_chain(g, profile, objective);
      best.kind = v.kind;
      for (StateId s = 0; s < n; ++s) {
        worst[s] = maximize ? std::min(worst[s], v.values[s]) : std::max(worst[s], v.values[s]);
      }
    } while (inner.next());
    for (StateId s = 0; s < n; ++s) {
      best.values[s] = maximize ? std::max(best.values[s], worst[s]) : std::min(best.values[s], worst[s]);
    }
  } while (outer.next());
  return best;
}

}  // namespace smgcheck::oracle
