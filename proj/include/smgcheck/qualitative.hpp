#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "smgcheck/smg.hpp"

namespace smgcheck {

// Graph-level fixpoints over a game. `player` marks the states whose owner
// plays for the objective (existential choice); all other states choose
// adversarially (universal choice). Probabilistic branching is existential
// for positive objectives and "all successors stay, some progress" for
// almost-sure objectives.

inline constexpr std::uint32_t kNoRank = std::numeric_limits<std::uint32_t>::max();

/// Predecessor index: for each state, the choices that can move into it.
class Predecessors {
 public:
  explicit Predecessors(const Smg& g);
  std::span<const ChoiceId> of(StateId s) const {
    return {choices_.data() + begin_[s], choices_.data() + begin_[s + 1]};
  }

 private:
  std::vector<std::size_t> begin_;
  std::vector<ChoiceId> choices_;
};

struct Attractor {
  std::vector<char> win;
  /// Breadth-first layer at which each state joined; kNoRank outside.
  std::vector<std::uint32_t> rank;
};

/// Least fixpoint inside `zone` seeded with `seeds`: a `player` state joins
/// through one usable choice, any other state once all its choices are
/// usable. A choice is usable when it is `eligible` (null: all are) and is
/// either marked in `pre_good` (joins at layer 0) or has a successor inside.
Attractor constrained_attractor(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                                const std::vector<char>& zone, const std::vector<char>& seeds,
                                const std::vector<char>* eligible, const std::vector<char>* pre_good);

/// States from which `player` can reach `target` with positive probability
/// without passing through `blocked` (null means nothing blocked).
Attractor positive_reach(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                         const std::vector<char>& target, const std::vector<char>* blocked = nullptr);

struct AlmostSure {
  std::vector<char> win;
  /// Attractor layer inside the winning region (from the final inner fixpoint).
  std::vector<std::uint32_t> rank;
  /// Outer round in which a losing state was removed (1-based); kNoRank for winners.
  std::vector<std::uint32_t> removed;
};

/// States from which `player` can reach `target` with probability 1, using
/// only the choices marked in `allowed` at its own states (null: all).
AlmostSure almost_sure_reach(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                             const std::vector<char>& target, const std::vector<char>* allowed = nullptr);

inline constexpr ChoiceId kNoChoice = std::numeric_limits<ChoiceId>::max();

struct CoBuchi {
  std::vector<char> win;
  /// Outside `win`: for states of the other side, a choice that keeps the
  /// play away from `win` or earns a bad choice; kNoChoice elsewhere.
  std::vector<ChoiceId> escape;
};

/// States from which `player` can make sure, with probability 1, that the
/// play reaches `target` or takes `bad` choices only finitely often.
CoBuchi almost_sure_cobuchi(const Smg& g, const Predecessors& pred, const std::vector<char>& player,
                            const std::vector<char>& bad, const std::vector<char>& target);

/// Marks the good choices that can recur: choice c at s with a successor in
/// the same strongly connected component of the graph with `avoid` removed.
std::vector<char> recurrent_choices(const Smg& g, const std::vector<char>& good,
                                    const std::vector<char>& avoid);

}  // namespace smgcheck
