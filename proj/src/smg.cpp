#include "smgcheck/smg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "smgcheck/error.hpp"

namespace smgcheck {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::BadDistribution: return "BadDistribution";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UndefinedChoice: return "UndefinedChoice";
    case ErrorKind::DisabledAction: return "DisabledAction";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownPlayer: return "UnknownPlayer";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::UnknownReward: return "UnknownReward";
    case ErrorKind::BadBound: return "BadBound";
    case ErrorKind::BadTarget: return "BadTarget";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::BadProvider: return "BadProvider";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::StateExplosion: return "StateExplosion";
    case ErrorKind::WrongScheme: return "WrongScheme";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::Io: return "Io";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// RewardStructure

void RewardStructure::set(ChoiceId choice, double value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), choice,
                             [](const auto& e, ChoiceId c) { return e.first < c; });
  if (it != entries_.end() && it->first == choice) {
    it->second = value;
  } else {
    entries_.insert(it, {choice, value});
  }
}

double RewardStructure::at(ChoiceId choice) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), choice,
                             [](const auto& e, ChoiceId c) { return e.first < c; });
  return (it != entries_.end() && it->first == choice) ? it->second : 0.0;
}

std::vector<double> RewardStructure::dense(std::size_t num_choices) const {
  std::vector<double> out(num_choices, 0.0);
  for (const auto& [c, v] : entries_) out[c] = v;
  return out;
}

// ---------------------------------------------------------------------------
// Smg

std::optional<PlayerId> Smg::find_player(std::string_view name) const {
  for (PlayerId p = 0; p < player_names_.size(); ++p) {
    if (player_names_[p] == name) return p;
  }
  return std::nullopt;
}

std::optional<std::size_t> Smg::find_action(StateId s, std::string_view label) const {
  for (ChoiceId c = first_choice(s); c < end_choice(s); ++c) {
    if (action_label(c) == label) return c - first_choice(s);
  }
  return std::nullopt;
}

const StateSet* Smg::label(std::string_view name) const {
  auto it = labels_.find(name);
  return it == labels_.end() ? nullptr : &it->second;
}

const RewardStructure* Smg::reward(std::string_view name) const {
  auto it = rewards_.find(name);
  return it == rewards_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// GameBuilder

PlayerId GameBuilder::add_player(std::string name) {
  for (const auto& existing : player_names_) {
    if (existing == name) throw Error(ErrorKind::DuplicateName, "player '" + name + "'");
  }
  player_names_.push_back(std::move(name));
  return static_cast<PlayerId>(player_names_.size() - 1);
}

StateId GameBuilder::add_state(PlayerId owner) {
  owners_.push_back(owner);
  return static_cast<StateId>(owners_.size() - 1);
}

std::uint32_t GameBuilder::intern(std::string_view label) {
  auto it = action_ids_.find(label);
  if (it != action_ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(action_names_.size());
  action_names_.emplace_back(label);
  action_ids_.emplace(std::string(label), id);
  return id;
}

std::size_t GameBuilder::add_action(StateId state, std::string_view label,
                                    Distribution distribution) {
  RawAction a{state, intern(label), transitions_.size(), 0};
  transitions_.insert(transitions_.end(), distribution.begin(), distribution.end());
  a.end = transitions_.size();
  actions_.push_back(a);
  return actions_.size() - 1;
}

void GameBuilder::add_label(std::string name, StateSet states) {
  if (labels_.contains(name) || rewards_.contains(name)) {
    throw Error(ErrorKind::DuplicateName, "label '" + name + "'");
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  labels_.emplace(std::move(name), std::move(states));
}

void GameBuilder::declare_reward(std::string name) {
  if (labels_.contains(name)) throw Error(ErrorKind::DuplicateName, "reward '" + name + "'");
  rewards_.try_emplace(std::move(name));
}

void GameBuilder::set_reward(std::string_view name, std::size_t action_handle, double value) {
  auto it = rewards_.find(name);
  if (it == rewards_.end()) {
    declare_reward(std::string(name));
    it = rewards_.find(name);
  }
  if (action_handle >= actions_.size()) {
    throw Error(ErrorKind::DanglingReference, "reward '" + std::string(name) + "' on unknown action");
  }
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorKind::BadParameter,
                "reward '" + std::string(name) + "' must be finite and nonnegative");
  }
  it->second.emplace_back(action_handle, value);
}

Smg GameBuilder::build() && {
  const std::size_t n = owners_.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (owners_[s] >= player_names_.size()) {
      throw Error(ErrorKind::DanglingReference,
                  "state " + std::to_string(s) + " owned by undeclared player " +
                      std::to_string(owners_[s]));
    }
  }
  if (initial_ && *initial_ >= n) {
    throw Error(ErrorKind::DanglingReference, "initial state " + std::to_string(*initial_));
  }

  // Validate distributions.
  std::vector<char> seen(n, 0);
  for (const auto& a : actions_) {
    if (a.state >= n) {
      throw Error(ErrorKind::DanglingReference, "action on undeclared state " + std::to_string(a.state));
    }
    const std::string where =
        "state " + std::to_string(a.state) + " action '" + action_names_[a.label] + "'";
    if (a.begin == a.end) throw Error(ErrorKind::BadDistribution, where + " has no transitions");
    double sum = 0.0;
    for (std::size_t t = a.begin; t < a.end; ++t) {
      const auto& tr = transitions_[t];
      if (tr.target >= n) {
        throw Error(ErrorKind::DanglingReference,
                    where + " targets undeclared state " + std::to_string(tr.target));
      }
      if (!(tr.probability > 0.0) || tr.probability > 1.0) {
        throw Error(ErrorKind::BadDistribution, where + " has probability outside (0,1]");
      }
      if (seen[tr.target]) {
        throw Error(ErrorKind::BadDistribution,
                    where + " lists state " + std::to_string(tr.target) + " twice");
      }
      seen[tr.target] = 1;
      sum += tr.probability;
    }
    for (std::size_t t = a.begin; t < a.end; ++t) seen[transitions_[t].target] = 0;
    if (std::abs(sum - 1.0) > kDistributionTolerance) {
      throw Error(ErrorKind::BadDistribution, where + " sums to " + std::to_string(sum));
    }
  }

  // Stable order by state keeps per-state declaration order.
  std::vector<std::size_t> order(actions_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return actions_[x].state < actions_[y].state; });

  Smg g;
  g.player_names_ = std::move(player_names_);
  g.owner_ = std::move(owners_);
  g.initial_ = initial_;

  std::vector<std::size_t> count(n, 0);
  for (const auto& a : actions_) ++count[a.state];
  std::uint32_t loop_label = 0;
  bool need_loop = std::any_of(count.begin(), count.end(), [](std::size_t c) { return c == 0; });
  if (need_loop) loop_label = intern(kDeadlockAction);

  g.action_names_ = std::move(action_names_);
  g.state_begin_.assign(n + 1, 0);
  std::vector<ChoiceId> handle_to_choice(actions_.size());
  g.choice_begin_.push_back(0);
  g.transitions_.reserve(transitions_.size() + n);

  std::size_t next = 0;
  for (StateId s = 0; s < n; ++s) {
    g.state_begin_[s] = static_cast<ChoiceId>(g.choice_state_.size());
    std::vector<std::uint32_t> labels_here;
    if (count[s] == 0) {
      g.choice_state_.push_back(s);
      g.choice_label_.push_back(loop_label);
      g.transitions_.push_back({s, 1.0});
      g.choice_begin_.push_back(g.transitions_.size());
      continue;
    }
    for (std::size_t k = 0; k < count[s]; ++k, ++next) {
      const auto& a = actions_[order[next]];
      if (std::find(labels_here.begin(), labels_here.end(), a.label) != labels_here.end()) {
        throw Error(ErrorKind::DuplicateName, "state " + std::to_string(s) + " declares action '" +
                                                  g.action_names_[a.label] + "' twice");
      }
      labels_here.push_back(a.label);
      handle_to_choice[order[next]] = static_cast<ChoiceId>(g.choice_state_.size());
      g.choice_state_.push_back(s);
      g.choice_label_.push_back(a.label);
      g.transitions_.insert(g.transitions_.end(), transitions_.begin() + static_cast<std::ptrdiff_t>(a.begin),
                            transitions_.begin() + static_cast<std::ptrdiff_t>(a.end));
      g.choice_begin_.push_back(g.transitions_.size());
    }
  }
  g.state_begin_[n] = static_cast<ChoiceId>(g.choice_state_.size());

  for (auto& [name, states] : labels_) {
    if (!states.empty() && states.back() >= n) {
      throw Error(ErrorKind::DanglingReference,
                  "label '" + name + "' names undeclared state " + std::to_string(states.back()));
    }
  }
  g.labels_ = std::move(labels_);

  for (auto& [name, entries] : rewards_) {
    RewardStructure r;
    r.entries_.reserve(entries.size());
    for (const auto& [handle, value] : entries) {
      if (value != 0.0) r.entries_.emplace_back(handle_to_choice[handle], value);
    }
    std::sort(r.entries_.begin(), r.entries_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // Later assignments to the same action win.
    std::vector<std::pair<ChoiceId, double>> merged;
    for (const auto& e : r.entries_) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second = e.second;
      } else {
        merged.push_back(e);
      }
    }
    r.entries_ = std::move(merged);
    g.rewards_.emplace(name, std::move(r));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Strategy

Strategy Strategy::memoryless(Coalition coalition, std::size_t num_states) {
  Strategy s;
  s.kind_ = StrategyKind::Memoryless;
  s.coalition_ = make_coalition(std::move(coalition));
  s.num_states_ = num_states;
  s.choices_.assign(num_states, -1);
  return s;
}

Strategy Strategy::step_indexed(Coalition coalition, std::size_t num_states, std::size_t horizon) {
  Strategy s;
  s.kind_ = StrategyKind::StepIndexed;
  s.coalition_ = make_coalition(std::move(coalition));
  s.num_states_ = num_states;
  s.horizon_ = horizon;
  s.choices_.assign(num_states * horizon, -1);
  return s;
}

std::size_t Strategy::slot(StateId s, std::size_t remaining) const {
  if (s >= num_states_) throw Error(ErrorKind::DanglingReference, "strategy state " + std::to_string(s));
  if (kind_ == StrategyKind::Memoryless) return s;
  if (remaining == 0 || remaining > horizon_) {
    throw Error(ErrorKind::BadParameter, "remaining steps " + std::to_string(remaining) +
                                             " outside [1," + std::to_string(horizon_) + "]");
  }
  return (remaining - 1) * num_states_ + s;
}

void Strategy::set(StateId s, std::size_t action) {
  choices_.at(slot(s, 0)) = static_cast<std::int32_t>(action);
}

std::optional<std::size_t> Strategy::choice(StateId s) const {
  auto v = choices_.at(slot(s, 0));
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

void Strategy::set(StateId s, std::size_t remaining, std::size_t action) {
  choices_.at(slot(s, remaining)) = static_cast<std::int32_t>(action);
}

std::optional<std::size_t> Strategy::choice(StateId s, std::size_t remaining) const {
  auto v = choices_.at(slot(s, remaining));
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

Coalition make_coalition(std::vector<PlayerId> players) {
  std::sort(players.begin(), players.end());
  players.erase(std::unique(players.begin(), players.end()), players.end());
  return players;
}

bool contains(const Coalition& coalition, PlayerId p) {
  return std::binary_search(coalition.begin(), coalition.end(), p);
}

std::vector<char> coalition_mask(const Smg& g, const Coalition& coalition) {
  std::vector<char> mask(g.num_states(), 0);
  for (StateId s = 0; s < g.num_states(); ++s) mask[s] = contains(coalition, g.owner(s)) ? 1 : 0;
  return mask;
}

std::vector<char> state_mask(std::size_t num_states, const StateSet& states) {
  std::vector<char> mask(num_states, 0);
  for (StateId s : states) {
    if (s >= num_states) throw Error(ErrorKind::BadTarget, "state " + std::to_string(s) + " out of range");
    mask[s] = 1;
  }
  return mask;
}

StateSet mask_to_set(const std::vector<char>& mask) {
  StateSet out;
  for (StateId s = 0; s < mask.size(); ++s) {
    if (mask[s]) out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived games

namespace {

// Copies g's structure into a builder; keep(s) returns the action indices to
// retain for state s, remap(s) the new id of s in copy `layer`.
template <typename Keep, typename Target>
void copy_layer(const Smg& g, GameBuilder& b, std::size_t offset, Keep keep, Target target,
                std::map<std::string, std::vector<std::pair<std::size_t, double>>>& rewards) {
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (std::size_t a : keep(s)) {
      ChoiceId c = g.choice(s, a);
      Distribution d;
      for (const auto& t : g.transitions(c)) d.push_back({target(t.target), t.probability});
      std::size_t h = b.add_action(static_cast<StateId>(offset + s), g.action_label(c), std::move(d));
      for (const auto& [name, r] : g.rewards()) {
        double v = r.at(c);
        if (v != 0.0) rewards[name].emplace_back(h, v);
      }
    }
  }
}

}  // namespace

Smg induced_game(const Smg& g, const Strategy& sigma) {
  const std::size_t n = g.num_states();
  if (sigma.num_states() != n) {
    throw Error(ErrorKind::BadParameter, "strategy covers " + std::to_string(sigma.num_states()) +
                                             " states, game has " + std::to_string(n));
  }
  auto owned = coalition_mask(g, sigma.coalition());
  for (PlayerId p : sigma.coalition()) {
    if (p >= g.num_players()) throw Error(ErrorKind::UnknownPlayer, "player " + std::to_string(p));
  }
  auto checked = [&](StateId s, std::optional<std::size_t> a) -> std::size_t {
    if (!a) throw Error(ErrorKind::UndefinedChoice, "no strategy entry for state " + std::to_string(s));
    if (*a >= g.num_actions(s)) {
      throw Error(ErrorKind::DisabledAction, "state " + std::to_string(s) + " has no action " +
                                                 std::to_string(*a));
    }
    return *a;
  };

  GameBuilder b;
  for (const auto& name : g.player_names()) b.add_player(name);
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> rewards;
  const std::size_t layers = sigma.kind() == StrategyKind::Memoryless ? 1 : sigma.horizon() + 1;
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (StateId s = 0; s < n; ++s) b.add_state(g.owner(s));
  }

  auto all_actions = [&](StateId s) {
    std::vector<std::size_t> v(g.num_actions(s));
    std::iota(v.begin(), v.end(), 0);
    return v;
  };

  if (sigma.kind() == StrategyKind::Memoryless) {
    copy_layer(
        g, b, 0,
        [&](StateId s) {
          if (!owned[s]) return all_actions(s);
          return std::vector<std::size_t>{checked(s, sigma.choice(s))};
        },
        [](StateId t) { return t; }, rewards);
  } else {
    const std::size_t h = sigma.horizon();
    // layer L holds remaining = h - L; the last layer (remaining 0) is absorbing-free
    // and keeps every action.
    for (std::size_t layer = 0; layer <= h; ++layer) {
      const std::size_t remaining = h - layer;
      const std::size_t next_layer = remaining == 0 ? layer : layer + 1;
      copy_layer(
          g, b, layer * n,
          [&](StateId s) {
            if (!owned[s] || remaining == 0) return all_actions(s);
            return std::vector<std::size_t>{checked(s, sigma.choice(s, remaining))};
          },
          [&](StateId t) { return static_cast<StateId>(next_layer * n + t); }, rewards);
    }
  }

  for (const auto& [name, states] : g.labels()) {
    StateSet lifted;
    for (std::size_t layer = 0; layer < layers; ++layer) {
      for (StateId s : states) lifted.push_back(static_cast<StateId>(layer * n + s));
    }
    b.add_label(name, std::move(lifted));
  }
  for (const auto& [name, r] : g.rewards()) b.declare_reward(name);
  for (const auto& [name, entries] : rewards) {
    for (const auto& [h, v] : entries) b.set_reward(name, h, v);
  }
  if (g.initial()) b.set_initial(*g.initial());
  return std::move(b).build();
}

Fragment reachable_fragment(const Smg& g, StateId initial) {
  if (initial >= g.num_states()) {
    throw Error(ErrorKind::DanglingReference, "initial state " + std::to_string(initial));
  }
  constexpr StateId kUnseen = static_cast<StateId>(-1);
  std::vector<StateId> id(g.num_states(), kUnseen);
  std::vector<StateId> order{initial};
  id[initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    StateId s = order[i];
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
      for (const auto& t : g.transitions(c)) {
        if (id[t.target] == kUnseen) {
          id[t.target] = static_cast<StateId>(order.size());
          order.push_back(t.target);
        }
      }
    }
  }

  GameBuilder b;
  for (const auto& name : g.player_names()) b.add_player(name);
  for (StateId s : order) b.add_state(g.owner(s));
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> rewards;
  for (StateId s : order) {
    for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
      Distribution d;
      for (const auto& t : g.transitions(c)) d.push_back({id[t.target], t.probability});
      std::size_t h = b.add_action(id[s], g.action_label(c), std::move(d));
      for (const auto& [name, r] : g.rewards()) {
        double v = r.at(c);
        if (v != 0.0) rewards[name].emplace_back(h, v);
      }
    }
  }
  for (const auto& [name, states] : g.labels()) {
    StateSet kept;
    for (StateId s : states) {
      if (id[s] != kUnseen) kept.push_back(id[s]);
    }
    b.add_label(name, std::move(kept));
  }
  for (const auto& [name, r] : g.rewards()) b.declare_reward(name);
  for (const auto& [name, entries] : rewards) {
    for (const auto& [h, v] : entries) b.set_reward(name, h, v);
  }
  b.set_initial(0);
  return {std::move(b).build(), std::move(order)};
}

}  // namespace smgcheck
