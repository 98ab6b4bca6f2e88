#include "smgcheck/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "smgcheck/error.hpp"
#include "smgcheck/model_io.hpp"
#include "smgcheck/qualitative.hpp"

namespace smgcheck {

namespace {

constexpr std::int32_t kUnset = -1;

// Relative tolerances: ties between choices, and "optimal" choices when
// building progress-respecting witnesses.
bool tied(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}
bool near_optimal(double q, double v) {
  if (std::isinf(q) || std::isinf(v)) return q == v;
  return std::abs(q - v) <= 1e-6 * std::max(1.0, std::abs(v));
}

struct Setup {
  std::vector<char> coalition;  // per state: owned by the coalition
  std::vector<char> maximizer;  // per state: owner maximizes
  std::vector<char> minimizer;
  std::vector<char> target;
};

Setup make_setup(const Smg& g, const Coalition& coalition, const StateSet& target, Optimum objective) {
  for (PlayerId p : coalition) {
    if (p >= g.num_players()) throw Error(ErrorKind::UnknownPlayer, "player id " + std::to_string(p));
  }
  if (target.empty()) throw Error(ErrorKind::BadTarget, "empty target set");
  Setup s;
  s.target = state_mask(g.num_states(), target);
  s.coalition = coalition_mask(g, coalition);
  s.maximizer.resize(g.num_states());
  s.minimizer.resize(g.num_states());
  for (StateId x = 0; x < g.num_states(); ++x) {
    bool max_side = objective == Optimum::Max ? s.coalition[x] != 0 : s.coalition[x] == 0;
    s.maximizer[x] = max_side ? 1 : 0;
    s.minimizer[x] = max_side ? 0 : 1;
  }
  return s;
}

Coalition complement(const Smg& g, const Coalition& coalition) {
  Coalition out;
  for (PlayerId p = 0; p < g.num_players(); ++p) {
    if (!contains(coalition, p)) out.push_back(p);
  }
  return out;
}

// Splits a per-state action choice into coalition and adversary strategies.
void split(const Smg& g, const Coalition& coalition, const Setup& setup,
           const std::vector<std::int32_t>& choice, Solution& sol) {
  sol.strategy = Strategy::memoryless(coalition, g.num_states());
  sol.adversary = Strategy::memoryless(complement(g, coalition), g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::size_t a = choice[s] == kUnset ? 0 : static_cast<std::size_t>(choice[s]);
    (setup.coalition[s] ? sol.strategy : sol.adversary).set(s, a);
  }
}

double expectation(const Smg& g, ChoiceId c, const std::vector<double>& v) {
  double sum = 0.0;
  for (const auto& t : g.transitions(c)) {
    double x = v[t.target];
    if (std::isinf(x)) return kInfinity;
    sum += t.probability * x;
  }
  return sum;
}

[[noreturn]] void no_convergence(std::size_t iterations) {
  throw Error(ErrorKind::NonConvergence,
              "value iteration did not converge within " + std::to_string(iterations) + " sweeps");
}

// Greedy choice: the lowest action index whose value ties the optimum.
template <typename QFn>
std::int32_t greedy(const Smg& g, StateId s, bool maximize, QFn q) {
  double best = maximize ? -kInfinity : kInfinity;
  std::vector<double> qs;
  qs.reserve(g.num_actions(s));
  for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
    double x = q(c);
    qs.push_back(x);
    best = maximize ? std::max(best, x) : std::min(best, x);
  }
  for (std::size_t a = 0; a < qs.size(); ++a) {
    if (tied(qs[a], best)) return static_cast<std::int32_t>(a);
  }
  return 0;
}

// Gauss-Seidel sweeps in descending state order over non-frozen states.
template <typename QFn>
std::size_t iterate(const Smg& g, const Setup& setup, std::vector<double>& v, const std::vector<char>& frozen,
                    const SolveOptions& options, QFn q) {
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    double delta = 0.0;
    for (StateId s = static_cast<StateId>(g.num_states()); s-- > 0;) {
      if (frozen[s]) continue;
      const bool maximize = setup.maximizer[s] != 0;
      double best = maximize ? -kInfinity : kInfinity;
      for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
        double x = q(c);
        best = maximize ? std::max(best, x) : std::min(best, x);
      }
      if (std::isinf(best) || std::isinf(v[s])) {
        if (best != v[s]) delta = kInfinity;
      } else {
        delta = std::max(delta, std::abs(best - v[s]));
      }
      v[s] = best;
    }
    if (delta < options.epsilon) return it;
  }
  no_convergence(options.max_iterations);
}

// Attractor-based choice: the lowest-index choice that is `usable` and
// either `progress` or has a successor ranked strictly below s.
std::int32_t ranked_choice(const Smg& g, StateId s, const std::vector<std::uint32_t>& rank,
                           const std::vector<char>* usable, const std::vector<char>* progress) {
  for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
    if (usable && !(*usable)[c]) continue;
    if (progress && (*progress)[c]) return static_cast<std::int32_t>(c - g.first_choice(s));
    for (const auto& t : g.transitions(c)) {
      if (rank[t.target] < rank[s]) return static_cast<std::int32_t>(c - g.first_choice(s));
    }
  }
  return kUnset;
}

// Witness for a maximizer whose value is the least fixpoint v: among
// near-optimal choices, prefer those that make progress towards `seeds`
// (or take a `positive` choice), so the witness cannot idle in a loop.
void maximizer_progress(const Smg& g, const Predecessors& pred, const Setup& setup,
                        const std::vector<double>& v, const std::vector<char>& seeds,
                        const std::vector<char>* positive, const std::vector<double>* reward,
                        const std::vector<char>& decided, std::vector<std::int32_t>& choice) {
  auto q = [&](ChoiceId c) { return (reward ? (*reward)[c] : 0.0) + expectation(g, c, v); };
  std::vector<char> eligible(g.num_choices(), 1);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!setup.maximizer[s]) continue;
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
      eligible[c] = near_optimal(q(c), v[s]) ? 1 : 0;
    }
  }
  std::vector<char> pre_good;
  if (positive) {
    pre_good.assign(g.num_choices(), 0);
    for (ChoiceId c = 0; c < g.num_choices(); ++c) pre_good[c] = ((*positive)[c] && eligible[c]) ? 1 : 0;
  }
  std::vector<char> zone(g.num_states(), 1);
  auto attr = constrained_attractor(g, pred, setup.maximizer, zone, seeds, &eligible,
                                    positive ? &pre_good : nullptr);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!setup.maximizer[s] || decided[s]) continue;
    std::int32_t a = kUnset;
    if (attr.win[s] && !seeds[s]) a = ranked_choice(g, s, attr.rank, &eligible, positive ? &pre_good : nullptr);
    if (a == kUnset) a = greedy(g, s, true, q);
    choice[s] = a;
  }
}

// A choice that stays inside the almost-sure region and lowers the rank.
std::int32_t sure_choice(const Smg& g, StateId s, const AlmostSure& sure, const std::vector<char>* allowed) {
  for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
    if (allowed && !(*allowed)[c]) continue;
    bool inside = true, closer = false;
    for (const auto& t : g.transitions(c)) {
      inside = inside && sure.win[t.target];
      closer = closer || sure.rank[t.target] < sure.rank[s];
    }
    if (inside && closer) return static_cast<std::int32_t>(c - g.first_choice(s));
  }
  return kUnset;
}

// Choices of the player against an almost-sure objective outside its winning
// region: keep away from the opponent's next-round region when possible.
std::int32_t spoiling_choice(const Smg& g, StateId s, const AlmostSure& as) {
  const std::uint32_t round = as.removed[s];
  auto later = [&](StateId t) { return as.win[t] || as.removed[t] > round; };
  for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
    bool touches = false;
    for (const auto& t : g.transitions(c)) touches = touches || later(t.target);
    if (!touches) return static_cast<std::int32_t>(c - g.first_choice(s));
  }
  for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
    for (const auto& t : g.transitions(c)) {
      if (as.removed[t.target] < round) return static_cast<std::int32_t>(c - g.first_choice(s));
    }
  }
  return 0;
}

Solution solve_bounded(const Smg& g, const Coalition& coalition, const Setup& setup, unsigned horizon) {
  const std::size_t n = g.num_states();
  std::vector<double> prev(n, 0.0), cur(n, 0.0);
  for (StateId s = 0; s < n; ++s) prev[s] = setup.target[s] ? 1.0 : 0.0;
  Solution sol;
  sol.strategy = Strategy::step_indexed(coalition, n, horizon);
  sol.adversary = Strategy::step_indexed(complement(g, coalition), n, horizon);
  for (unsigned remaining = 1; remaining <= horizon; ++remaining) {
    for (StateId s = 0; s < n; ++s) {
      auto q = [&](ChoiceId c) { return expectation(g, c, prev); };
      std::int32_t a = greedy(g, s, setup.maximizer[s] != 0, q);
      (setup.coalition[s] ? sol.strategy : sol.adversary).set(s, remaining, static_cast<std::size_t>(a));
      cur[s] = setup.target[s] ? 1.0 : q(g.choice(s, static_cast<std::size_t>(a)));
    }
    std::swap(prev, cur);
  }
  sol.values = {ValueKind::Probability, std::move(prev)};
  sol.iterations = horizon;
  return sol;
}

Solution solve_unbounded(const Smg& g, const Coalition& coalition, const Setup& setup,
                         const SolveOptions& options) {
  const std::size_t n = g.num_states();
  Predecessors pred(g);
  auto positive = positive_reach(g, pred, setup.maximizer, setup.target);
  auto sure = almost_sure_reach(g, pred, setup.maximizer, setup.target);

  std::vector<double> v(n, 0.0);
  std::vector<char> frozen(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (sure.win[s]) {
      v[s] = 1.0;
      frozen[s] = 1;
    } else if (!positive.win[s]) {
      frozen[s] = 1;
    }
  }
  Solution sol;
  sol.iterations = iterate(g, setup, v, frozen, options, [&](ChoiceId c) { return expectation(g, c, v); });

  std::vector<std::int32_t> choice(n, kUnset);
  std::vector<char> decided(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (setup.target[s]) {
      choice[s] = 0;
      decided[s] = 1;
    } else if (setup.maximizer[s] && sure.win[s]) {
      choice[s] = sure_choice(g, s, sure, nullptr);
      decided[s] = 1;
    } else if (!setup.maximizer[s]) {
      choice[s] = greedy(g, s, false, [&](ChoiceId c) { return expectation(g, c, v); });
      decided[s] = 1;
    }
  }
  std::vector<char> seeds(n, 0);
  for (StateId s = 0; s < n; ++s) seeds[s] = (setup.target[s] || sure.win[s] || !positive.win[s]) ? 1 : 0;
  maximizer_progress(g, pred, setup, v, seeds, nullptr, nullptr, decided, choice);

  split(g, coalition, setup, choice, sol);
  sol.values = {ValueKind::Probability, std::move(v)};
  return sol;
}

// Cumulative semantics: infinite where the minimizer cannot make sure that
// the target is reached or rewards stop almost surely.
Solution solve_cumulative(const Smg& g, const Coalition& coalition, const Setup& setup,
                          const std::vector<double>& reward, const SolveOptions& options) {
  const std::size_t n = g.num_states();
  Predecessors pred(g);
  std::vector<char> positive(g.num_choices(), 0);
  for (ChoiceId c = 0; c < g.num_choices(); ++c) positive[c] = reward[c] > 0.0 ? 1 : 0;
  auto recurring = recurrent_choices(g, positive, setup.target);
  CoBuchi finite;
  if (std::any_of(recurring.begin(), recurring.end(), [](char x) { return x != 0; })) {
    finite = almost_sure_cobuchi(g, pred, setup.minimizer, positive, setup.target);
  } else {
    finite = {std::vector<char>(n, 1), std::vector<ChoiceId>(n, kNoChoice)};
  }

  std::vector<double> v(n, 0.0);
  std::vector<char> frozen(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (setup.target[s]) {
      frozen[s] = 1;
    } else if (!finite.win[s]) {
      v[s] = kInfinity;
      frozen[s] = 1;
    }
  }
  auto q = [&](ChoiceId c) { return reward[c] + expectation(g, c, v); };
  Solution sol;
  sol.iterations = iterate(g, setup, v, frozen, options, q);

  std::vector<std::int32_t> choice(n, kUnset);
  std::vector<char> decided(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (setup.target[s]) {
      choice[s] = 0;
      decided[s] = 1;
    } else if (!setup.maximizer[s]) {
      choice[s] = greedy(g, s, false, q);
      decided[s] = 1;
    } else if (!finite.win[s]) {
      choice[s] = static_cast<std::int32_t>(finite.escape[s] - g.first_choice(s));
      decided[s] = 1;
    }
  }
  // Where optimal choices alone reach the target almost surely, the witness does so.
  std::vector<char> optimal(g.num_choices(), 0);
  for (StateId s = 0; s < n; ++s) {
    if (!setup.maximizer[s] || decided[s]) continue;
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) optimal[c] = near_optimal(q(c), v[s]) ? 1 : 0;
  }
  auto proper = almost_sure_reach(g, pred, setup.maximizer, setup.target, &optimal);
  for (StateId s = 0; s < n; ++s) {
    if (decided[s] || !proper.win[s]) continue;
    choice[s] = sure_choice(g, s, proper, &optimal);
    decided[s] = choice[s] != kUnset;
  }
  std::vector<char> seeds(n, 0);
  for (StateId s = 0; s < n; ++s) seeds[s] = (setup.target[s] || v[s] == 0.0) ? 1 : 0;
  maximizer_progress(g, pred, setup, v, seeds, &positive, &reward, decided, choice);

  split(g, coalition, setup, choice, sol);
  sol.values = {ValueKind::Reward, std::move(v)};
  return sol;
}

// Infinite semantics: finite only where the minimizer can force the target
// almost surely. The least fixpoint is a lower bound; the minimizer's witness
// is kept proper (target reached almost surely) and improved until no choice
// beats its evaluation.
Solution solve_infinite(const Smg& g, const Coalition& coalition, const Setup& setup,
                        const std::vector<double>& reward, const SolveOptions& options) {
  const std::size_t n = g.num_states();
  Predecessors pred(g);
  auto region = almost_sure_reach(g, pred, setup.minimizer, setup.target);

  std::vector<double> lower(n, 0.0);
  std::vector<char> frozen(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (setup.target[s]) {
      frozen[s] = 1;
    } else if (!region.win[s]) {
      lower[s] = kInfinity;
      frozen[s] = 1;
    }
  }
  Solution sol;
  {
    auto q = [&](ChoiceId c) { return reward[c] + expectation(g, c, lower); };
    sol.iterations = iterate(g, setup, lower, frozen, options, q);
  }

  // Proper initial witness: near-optimal choices ranked towards the target,
  // falling back to the almost-sure attractor.
  std::vector<char> eligible(g.num_choices(), 1);
  for (StateId s = 0; s < n; ++s) {
    if (!setup.minimizer[s] || !region.win[s]) continue;
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
      bool inside = true;
      for (const auto& t : g.transitions(c)) inside = inside && region.win[t.target];
      eligible[c] = (inside && near_optimal(reward[c] + expectation(g, c, lower), lower[s])) ? 1 : 0;
    }
  }
  auto attr = constrained_attractor(g, pred, setup.minimizer, region.win, setup.target, &eligible, nullptr);
  std::vector<char> region_safe(g.num_choices(), 0);
  for (ChoiceId c = 0; c < g.num_choices(); ++c) {
    bool inside = true;
    for (const auto& t : g.transitions(c)) inside = inside && region.win[t.target];
    region_safe[c] = inside ? 1 : 0;
  }
  std::vector<std::int32_t> choice(n, kUnset);
  for (StateId s = 0; s < n; ++s) {
    if (!setup.minimizer[s] || setup.target[s]) continue;
    if (!region.win[s]) {
      choice[s] = 0;
      continue;
    }
    std::int32_t a = attr.win[s] ? ranked_choice(g, s, attr.rank, &eligible, nullptr) : kUnset;
    if (a == kUnset) a = ranked_choice(g, s, region.rank, &region_safe, nullptr);
    choice[s] = a == kUnset ? 0 : a;
  }

  std::vector<char> evaluated(n, 0);
  for (StateId s = 0; s < n; ++s) evaluated[s] = frozen[s];
  std::vector<double> v;
  for (std::size_t round = 0;; ++round) {
    if (round > 10'000) no_convergence(round);
    v = lower;
    auto q = [&](ChoiceId c) { return reward[c] + expectation(g, c, v); };
    // Maximizer best response against the fixed minimizer choices.
    for (std::size_t it = 1;; ++it) {
      if (it > options.max_iterations) no_convergence(options.max_iterations);
      double delta = 0.0;
      for (StateId s = static_cast<StateId>(n); s-- > 0;) {
        if (evaluated[s]) continue;
        double best;
        if (setup.minimizer[s]) {
          best = q(g.choice(s, static_cast<std::size_t>(choice[s])));
        } else {
          best = -kInfinity;
          for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) best = std::max(best, q(c));
        }
        delta = std::max(delta, std::abs(best - v[s]));
        v[s] = best;
      }
      sol.iterations += 1;
      if (delta < options.epsilon) break;
    }
    bool improved = false;
    for (StateId s = 0; s < n; ++s) {
      if (!setup.minimizer[s] || evaluated[s]) continue;
      std::int32_t a = greedy(g, s, false, q);
      double best = q(g.choice(s, static_cast<std::size_t>(a)));
      if (best < v[s] - 1e-6 * std::max(1.0, std::abs(v[s]))) {
        choice[s] = a;
        improved = true;
      }
    }
    if (!improved) break;
  }

  auto q = [&](ChoiceId c) { return reward[c] + expectation(g, c, v); };
  for (StateId s = 0; s < n; ++s) {
    if (setup.target[s]) {
      choice[s] = 0;
    } else if (setup.maximizer[s]) {
      choice[s] = region.win[s] ? greedy(g, s, true, q) : spoiling_choice(g, s, region);
    }
  }
  split(g, coalition, setup, choice, sol);
  sol.values = {ValueKind::Reward, std::move(v)};
  return sol;
}

// Zero semantics: reward counts only on paths that reach the target. Iterates
// on (reward-on-reaching-paths, reach probability) pairs; the weighted reward
// of a choice is sum_t P(t) * (r * p(t) + w(t)).
Solution solve_zero(const Smg& g, const Coalition& coalition, const Setup& setup,
                    const std::vector<double>& reward, const SolveOptions& options) {
  const std::size_t n = g.num_states();
  Predecessors pred(g);
  std::vector<char> everyone(n, 1);
  auto can_reach = positive_reach(g, pred, everyone, setup.target);

  std::vector<double> w(n, 0.0), p(n, 0.0);
  std::vector<char> frozen(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (setup.target[s]) p[s] = 1.0;
    frozen[s] = (setup.target[s] || !can_reach.win[s]) ? 1 : 0;
  }
  auto weighted = [&](ChoiceId c) {
    double sum = 0.0;
    for (const auto& t : g.transitions(c)) sum += t.probability * (reward[c] * p[t.target] + w[t.target]);
    return sum;
  };
  auto reach = [&](ChoiceId c) {
    double sum = 0.0;
    for (const auto& t : g.transitions(c)) sum += t.probability * p[t.target];
    return sum;
  };
  std::vector<std::int32_t> choice(n, 0);
  Solution sol;
  for (std::size_t it = 1;; ++it) {
    if (it > options.max_iterations) no_convergence(options.max_iterations);
    double delta = 0.0;
    for (StateId s = static_cast<StateId>(n); s-- > 0;) {
      if (frozen[s]) continue;
      std::int32_t a = greedy(g, s, setup.maximizer[s] != 0, weighted);
      ChoiceId c = g.choice(s, static_cast<std::size_t>(a));
      double nw = weighted(c), np = reach(c);
      delta = std::max({delta, std::abs(nw - w[s]), std::abs(np - p[s])});
      w[s] = nw;
      p[s] = np;
      choice[s] = a;
    }
    if (delta < options.epsilon) {
      sol.iterations = it;
      break;
    }
  }
  split(g, coalition, setup, choice, sol);
  sol.values = {ValueKind::Reward, std::move(w)};
  return sol;
}

bool satisfies(double v, const Bound& b) {
  switch (b.relation) {
    case Relation::Le: return v <= b.threshold;
    case Relation::Lt: return v < b.threshold;
    case Relation::Ge: return v >= b.threshold;
    case Relation::Gt: return v > b.threshold;
  }
  return false;
}

}  // namespace

Solution solve_prob(const Smg& g, const Coalition& coalition, const StateSet& target,
                    std::optional<unsigned> horizon, Optimum objective, const SolveOptions& options) {
  Setup setup = make_setup(g, coalition, target, objective);
  if (horizon) return solve_bounded(g, coalition, setup, *horizon);
  return solve_unbounded(g, coalition, setup, options);
}

StateSet almost_sure_reach(const Smg& g, const Coalition& coalition, const StateSet& target) {
  Setup setup = make_setup(g, coalition, target, Optimum::Max);
  Predecessors pred(g);
  return mask_to_set(almost_sure_reach(g, pred, setup.coalition, setup.target).win);
}

Solution solve_reward(const Smg& g, const Coalition& coalition, std::string_view reward,
                      const StateSet& target, Star star, Optimum objective, const SolveOptions& options) {
  const RewardStructure* r = g.reward(reward);
  if (!r) throw Error(ErrorKind::UnknownReward, "'" + std::string(reward) + "'");
  Setup setup = make_setup(g, coalition, target, objective);
  auto dense = r->dense(g.num_choices());
  switch (star) {
    case Star::Cumulative: return solve_cumulative(g, coalition, setup, dense, options);
    case Star::Infinite: return solve_infinite(g, coalition, setup, dense, options);
    case Star::Zero: return solve_zero(g, coalition, setup, dense, options);
  }
  throw Error(ErrorKind::BadParameter, "unknown star semantics");
}

Coalition resolve_coalition(const Smg& g, const std::vector<std::string>& names) {
  Coalition out;
  for (const auto& name : names) {
    auto p = g.find_player(name);
    if (!p) throw Error(ErrorKind::UnknownPlayer, "'" + name + "'");
    out.push_back(*p);
  }
  return make_coalition(std::move(out));
}

FormulaContext context_of(const Smg& g) {
  FormulaContext ctx;
  ctx.players.emplace(g.player_names().begin(), g.player_names().end());
  ctx.labels.emplace();
  for (const auto& [name, states] : g.labels()) ctx.labels->insert(name);
  ctx.rewards.emplace();
  for (const auto& [name, r] : g.rewards()) ctx.rewards->insert(name);
  return ctx;
}

Optimum objective_of(const Formula& f) {
  if (const auto* b = std::get_if<Bound>(&f.query)) {
    return (b->relation == Relation::Ge || b->relation == Relation::Gt) ? Optimum::Max : Optimum::Min;
  }
  return std::get<Optimum>(f.query);
}

CheckResult check(const Smg& g, StateId initial, const Formula& f, const SolveOptions& options) {
  if (initial >= g.num_states()) throw Error(ErrorKind::BadParameter, "initial state out of range");
  Coalition coalition = resolve_coalition(g, f.coalition);
  const StateSet* target = g.label(f.target);
  if (!target) throw Error(ErrorKind::UnknownLabel, "'" + f.target + "'");
  const Optimum objective = objective_of(f);

  Solution sol = f.reward ? solve_reward(g, coalition, *f.reward, *target, f.star, objective, options)
                          : solve_prob(g, coalition, *target, f.step_bound, objective, options);
  CheckResult out;
  out.value = sol.values[initial];
  if (const auto* b = std::get_if<Bound>(&f.query)) {
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (satisfies(sol.values[s], *b)) out.satisfying.push_back(s);
    }
    out.holds = satisfies(out.value, *b);
  }
  out.values = std::move(sol.values);
  out.strategy = std::move(sol.strategy);
  out.adversary = std::move(sol.adversary);
  out.iterations = sol.iterations;
  return out;
}

CheckResult evaluate_under(const Smg& g, const Strategy& sigma, StateId initial, const Formula& f,
                           const SolveOptions& options) {
  Coalition coalition = resolve_coalition(g, f.coalition);
  for (PlayerId p : coalition) {
    if (contains(sigma.coalition(), p)) {
      throw Error(ErrorKind::BadParameter,
                  "player '" + g.player_name(p) + "' is both fixed by the strategy and in the formula's coalition");
    }
  }
  Smg fixed = induced_game(g, sigma);
  return check(fixed, initial, f, options);
}

void write_values_csv(std::ostream& out, const ValueVector& values) {
  out << "state,value\n";
  for (std::size_t s = 0; s < values.size(); ++s) out << s << ',' << format_number(values.values[s]) << '\n';
}

}  // namespace smgcheck
