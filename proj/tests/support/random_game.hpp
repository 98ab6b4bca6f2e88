#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "smgcheck/smg.hpp"

namespace smgcheck::testing {

struct RandomGameOptions {
  unsigned max_states = 6;
  unsigned max_actions = 3;
  unsigned max_support = 3;
  unsigned players = 2;
  /// Probability that an action reward is zero.
  double zero_reward = 0.4;
};

/// Random SMG with a nonempty "goal" label and a reward structure "r".
/// Probabilities are multiples of 1/8 so that they are exact in binary.
inline Smg random_game(std::mt19937_64& rng, const RandomGameOptions& o = {}) {
  auto uniform = [&](unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng); };
  GameBuilder b;
  for (unsigned p = 0; p < o.players; ++p) b.add_player("p" + std::to_string(p));
  const unsigned n = uniform(1, o.max_states);
  for (unsigned s = 0; s < n; ++s) b.add_state(uniform(0, o.players - 1));
  b.declare_reward("r");
  std::bernoulli_distribution zero(o.zero_reward);
  for (unsigned s = 0; s < n; ++s) {
    const unsigned actions = uniform(1, o.max_actions);
    for (unsigned a = 0; a < actions; ++a) {
      std::vector<StateId> targets(n);
      for (unsigned t = 0; t < n; ++t) targets[t] = t;
      std::shuffle(targets.begin(), targets.end(), rng);
      unsigned support = std::min(n, uniform(1, o.max_support));
      std::vector<unsigned> eighths(support, 1);
      for (unsigned extra = support; extra < 8; ++extra) eighths[uniform(0, support - 1)] += 1;
      Distribution d;
      for (unsigned i = 0; i < support; ++i) d.push_back({targets[i], eighths[i] / 8.0});
      auto h = b.add_action(s, "a" + std::to_string(a), std::move(d));
      if (!zero(rng)) b.set_reward("r", h, uniform(1, 4));
    }
  }
  StateSet goal;
  for (unsigned s = 0; s < n; ++s) {
    if (uniform(0, 3) == 0) goal.push_back(s);
  }
  if (goal.empty()) goal.push_back(uniform(0, n - 1));
  b.add_label("goal", goal);
  b.set_initial(0);
  return std::move(b).build();
}

inline bool same_value(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

}  // namespace smgcheck::testing
