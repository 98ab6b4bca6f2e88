#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smgcheck/engine.hpp"
#include "smgcheck/formula.hpp"
#include "smgcheck/smg.hpp"

namespace smgcheck::oracle {

/// One action index per state: a full memoryless deterministic profile.
using Profile = std::vector<std::size_t>;

/// Unbounded reachability of `target`, or the reward cumulated until the
/// first target visit under `star` when `reward` is set.
struct Objective {
  StateSet target;
  std::optional<std::string> reward;
  Star star = Star::Cumulative;
};

inline constexpr std::size_t kDefaultProfileCap = 1'000'000;

/// Product of per-state action counts, saturated at SIZE_MAX.
std::size_t count_profiles(const Smg& g);

/// All (coalition, adversary) strategy pairs, coalition strategies outermost,
/// each side in lexicographic order of its action vector (lowest state id most
/// significant). Throws TooLarge above `cap` profiles.
std::vector<std::pair<Strategy, Strategy>> enumerate_profiles(const Smg& g, const Coalition& coalition,
                                                              std::size_t cap = kDefaultProfileCap);

Profile combine(const Strategy& coalition_side, const Strategy& adversary_side);

/// Exact policy evaluation on the Markov chain induced by the profile.
/// Chains with at most `exact_limit` unknowns are solved over rationals, larger
/// ones in floating point with a residual check (SingularSystem on failure).
ValueVector evaluate_chain(const Smg& g, const Profile& profile, const Objective& objective,
                           std::size_t exact_limit = 64);

/// Per state: max over coalition strategies of min over adversary strategies
/// (min-max for Optimum::Min), restricted to memoryless deterministic profiles.
ValueVector brute_force_value(const Smg& g, const Coalition& coalition, const Objective& objective,
                              Optimum optimum, std::size_t cap = kDefaultProfileCap);

}  // namespace smgcheck::oracle
