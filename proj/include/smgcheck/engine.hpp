#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "smgcheck/formula.hpp"
#include "smgcheck/smg.hpp"

namespace smgcheck {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ValueKind { Probability, Reward };

/// Per-state result; rewards may be +infinity.
struct ValueVector {
  ValueKind kind = ValueKind::Probability;
  std::vector<double> values;

  double operator[](StateId s) const { return values[s]; }
  std::size_t size() const { return values.size(); }
};

struct SolveOptions {
  /// Value iteration stops once no state changes by epsilon or more in a sweep.
  double epsilon = 1e-8;
  std::size_t max_iterations = 1'000'000;
};

struct Solution {
  ValueVector values;
  /// Witness for the coalition.
  Strategy strategy;
  /// Optimal counter-strategy of the remaining players.
  Strategy adversary;
  std::size_t iterations = 0;
};

/// Optimal probability of reaching `target` (within `horizon` steps when
/// given). With a horizon the strategies are step-indexed.
Solution solve_prob(const Smg& g, const Coalition& coalition, const StateSet& target,
                    std::optional<unsigned> horizon, Optimum objective, const SolveOptions& options = {});

/// States from which the coalition can force reaching `target` with probability 1.
StateSet almost_sure_reach(const Smg& g, const Coalition& coalition, const StateSet& target);

/// Optimal expected reward cumulated until the first visit to `target`,
/// with `star` deciding the reward of paths that never get there.
Solution solve_reward(const Smg& g, const Coalition& coalition, std::string_view reward,
                      const StateSet& target, Star star, Optimum objective,
                      const SolveOptions& options = {});

struct CheckResult {
  ValueVector values;
  /// Value at the initial state.
  double value = 0.0;
  /// Outcome at the initial state for bound queries.
  std::optional<bool> holds;
  /// States satisfying the bound (bound queries only).
  StateSet satisfying;
  Strategy strategy;
  Strategy adversary;
  std::size_t iterations = 0;
};

Coalition resolve_coalition(const Smg& g, const std::vector<std::string>& names);
FormulaContext context_of(const Smg& g);
Optimum objective_of(const Formula& f);

CheckResult check(const Smg& g, StateId initial, const Formula& f, const SolveOptions& options = {});

/// Fixes sigma in g and checks f on the resulting game. The coalition of f
/// must be disjoint from sigma's.
CheckResult evaluate_under(const Smg& g, const Strategy& sigma, StateId initial, const Formula& f,
                           const SolveOptions& options = {});

/// CSV `state,value` with `inf` for infinite values.
void write_values_csv(std::ostream& out, const ValueVector& values);

}  // namespace smgcheck
