#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smgcheck {

using StateId = std::uint32_t;
using PlayerId = std::uint32_t;
/// Global index of a (state, action) pair.
using ChoiceId = std::uint32_t;

/// Sorted, duplicate-free list of states.
using StateSet = std::vector<StateId>;
/// Sorted, duplicate-free list of players.
using Coalition = std::vector<PlayerId>;

inline constexpr double kDistributionTolerance = 1e-9;
inline constexpr std::string_view kDeadlockAction = "loop";

struct Transition {
  StateId target;
  double probability;
};

using Distribution = std::vector<Transition>;

/// Sparse action rewards; absent entries are zero.
class RewardStructure {
 public:
  void set(ChoiceId choice, double value);
  double at(ChoiceId choice) const;
  std::vector<double> dense(std::size_t num_choices) const;
  const std::vector<std::pair<ChoiceId, double>>& entries() const { return entries_; }

 private:
  friend class GameBuilder;
  std::vector<std::pair<ChoiceId, double>> entries_;  // sorted by choice
};

/// Explicit turn-based stochastic multi-player game. Immutable once built.
class Smg {
 public:
  std::size_t num_states() const { return owner_.size(); }
  std::size_t num_players() const { return player_names_.size(); }
  std::size_t num_choices() const { return choice_state_.size(); }

  const std::string& player_name(PlayerId p) const { return player_names_.at(p); }
  const std::vector<std::string>& player_names() const { return player_names_; }
  std::optional<PlayerId> find_player(std::string_view name) const;

  PlayerId owner(StateId s) const { return owner_[s]; }
  ChoiceId first_choice(StateId s) const { return state_begin_[s]; }
  ChoiceId end_choice(StateId s) const { return state_begin_[s + 1]; }
  std::size_t num_actions(StateId s) const { return state_begin_[s + 1] - state_begin_[s]; }
  ChoiceId choice(StateId s, std::size_t action) const {
    return state_begin_[s] + static_cast<ChoiceId>(action);
  }
  StateId state_of(ChoiceId c) const { return choice_state_[c]; }
  std::size_t action_index(ChoiceId c) const { return c - state_begin_[choice_state_[c]]; }
  const std::string& action_label(ChoiceId c) const { return action_names_[choice_label_[c]]; }
  std::optional<std::size_t> find_action(StateId s, std::string_view label) const;

  std::span<const Transition> transitions(ChoiceId c) const {
    return {transitions_.data() + choice_begin_[c], transitions_.data() + choice_begin_[c + 1]};
  }

  const std::map<std::string, StateSet, std::less<>>& labels() const { return labels_; }
  const StateSet* label(std::string_view name) const;
  const std::map<std::string, RewardStructure, std::less<>>& rewards() const { return rewards_; }
  const RewardStructure* reward(std::string_view name) const;

  std::optional<StateId> initial() const { return initial_; }

 private:
  friend class GameBuilder;

  std::vector<std::string> player_names_;
  std::vector<PlayerId> owner_;
  std::vector<ChoiceId> state_begin_;  // size num_states + 1
  std::vector<StateId> choice_state_;
  std::vector<std::uint32_t> choice_label_;
  std::vector<std::string> action_names_;
  std::vector<std::size_t> choice_begin_;  // size num_choices + 1
  std::vector<Transition> transitions_;
  std::map<std::string, StateSet, std::less<>> labels_;
  std::map<std::string, RewardStructure, std::less<>> rewards_;
  std::optional<StateId> initial_;
};

/// Collects the raw parts of a game and validates them in build().
/// Actions keep their declaration order per state; states without actions
/// are closed with a zero-reward self-loop named "loop".
class GameBuilder {
 public:
  PlayerId add_player(std::string name);
  StateId add_state(PlayerId owner);
  std::size_t num_states() const { return owners_.size(); }
  std::size_t num_players() const { return player_names_.size(); }

  /// Returns a handle usable with set_reward; handles are renumbered by build().
  std::size_t add_action(StateId state, std::string_view label, Distribution distribution);
  void add_label(std::string name, StateSet states);
  void declare_reward(std::string name);
  void set_reward(std::string_view name, std::size_t action_handle, double value);
  void set_initial(StateId s) { initial_ = s; }

  Smg build() &&;

 private:
  struct RawAction {
    StateId state;
    std::uint32_t label;
    std::size_t begin;
    std::size_t end;
  };

  std::uint32_t intern(std::string_view label);

  std::vector<std::string> player_names_;
  std::vector<PlayerId> owners_;
  std::vector<RawAction> actions_;
  std::vector<Transition> transitions_;
  std::vector<std::string> action_names_;
  std::map<std::string, std::uint32_t, std::less<>> action_ids_;
  std::map<std::string, StateSet, std::less<>> labels_;
  std::map<std::string, std::vector<std::pair<std::size_t, double>>, std::less<>> rewards_;
  std::optional<StateId> initial_;
};

enum class StrategyKind { Memoryless, StepIndexed };

/// Deterministic strategy for a coalition: an action index per controlled
/// state, or per (state, remaining steps) for step-indexed strategies.
class Strategy {
 public:
  Strategy() = default;
  static Strategy memoryless(Coalition coalition, std::size_t num_states);
  static Strategy step_indexed(Coalition coalition, std::size_t num_states, std::size_t horizon);

  StrategyKind kind() const { return kind_; }
  const Coalition& coalition() const { return coalition_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t horizon() const { return horizon_; }

  void set(StateId s, std::size_t action);
  std::optional<std::size_t> choice(StateId s) const;
  /// remaining in [1, horizon].
  void set(StateId s, std::size_t remaining, std::size_t action);
  std::optional<std::size_t> choice(StateId s, std::size_t remaining) const;

  bool operator==(const Strategy&) const = default;

 private:
  std::size_t slot(StateId s, std::size_t remaining) const;

  StrategyKind kind_ = StrategyKind::Memoryless;
  Coalition coalition_;
  std::size_t num_states_ = 0;
  std::size_t horizon_ = 0;
  std::vector<std::int32_t> choices_;
};

Coalition make_coalition(std::vector<PlayerId> players);
bool contains(const Coalition& coalition, PlayerId p);
std::vector<char> coalition_mask(const Smg& g, const Coalition& coalition);
std::vector<char> state_mask(std::size_t num_states, const StateSet& states);
StateSet mask_to_set(const std::vector<char>& mask);

/// Keeps only the strategy's action at coalition-owned states. A step-indexed
/// strategy is applied on the product with a remaining-steps counter: state
/// (s, r) gets id (horizon - r) * n + s, so original ids denote full horizon.
Smg induced_game(const Smg& g, const Strategy& sigma);

struct Fragment {
  Smg game;
  std::vector<StateId> original;  // fragment id -> id in the source game
};

/// Restriction to the states reachable from initial, numbered in
/// breadth-first order (initial becomes 0).
Fragment reachable_fragment(const Smg& g, StateId initial);

}  // namespace smgcheck
