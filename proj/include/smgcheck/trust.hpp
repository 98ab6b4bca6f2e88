#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "smgcheck/smg.hpp"

namespace smgcheck {

enum class Pricing { Original, MaxDifference };
enum class Sharing { Automatic, Strategic };

/// td value meaning "reset trust to 0 on an unpaid service".
inline constexpr unsigned kTdReset = std::numeric_limits<unsigned>::max();

/// Mechanism parameters. Per-provider vectors (td, st, c) may hold a single
/// entry, which then applies to every provider.
struct TrustParams {
  unsigned n_providers = 3;
  double alpha = 0.8;
  std::vector<unsigned> td{2};
  std::vector<double> st{5.0};
  std::vector<double> c{0.05};
  double c_min = 2.0;
  double c_max = 10.0;
  double t_prime = 8.0;
  unsigned trust_init = 5;
  unsigned trust_max = 10;
  unsigned k = 13;
  Pricing pricing = Pricing::Original;
  Sharing sharing = Sharing::Automatic;
  std::size_t max_states = 5'000'000;

  unsigned td_of(std::size_t i) const { return td.size() == 1 ? td[0] : td.at(i); }
  double st_of(std::size_t i) const { return st.size() == 1 ? st[0] : st.at(i); }
  double c_of(std::size_t i) const { return c.size() == 1 ? c[0] : c.at(i); }
};

/// Throws BadParameter when an invariant is violated.
void validate(const TrustParams& p);

/// Applies one `key=value` setting; keys are the TrustParams field names.
void apply_setting(TrustParams& p, std::string_view key, std::string_view value);
/// Reads `key=value` lines ('#' comments, blank lines ignored).
TrustParams read_trust_config(std::istream& in, TrustParams base = {});
std::string format_td(unsigned td);
std::string_view to_string(Pricing p);
std::string_view to_string(Sharing s);

/// alpha * trust[i] + (1 - alpha) * mean of the other entries. With a single
/// provider the indirect measure is trust[i] itself.
double trust_level(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i);
/// trust_level(p, trust, i) >= st_i, decided in exact rational arithmetic.
bool service_enabled(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i);
double service_cost(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i);
/// Per provider: st_i <= (1 - alpha) * trust_max, evaluated exactly.
std::vector<bool> attack_feasible(const TrustParams& p);

enum class Phase : std::uint8_t { Choose, Negotiate, DecidePay, Share, Done, Stuck };

struct TrustState {
  Phase phase = Phase::Choose;
  unsigned provider = 0;  // meaningful for Negotiate, DecidePay, Share
  unsigned services = 0;
  std::vector<unsigned> trust;

  bool operator==(const TrustState&) const = default;
};

std::string describe(const TrustState& s);

/// Players: 0 = requester, i = provider_i. Labels: got_0..got_k, got_k (alias
/// of the last), done, stuck. Rewards: cost, paid, unpaid, received and
/// their per-provider variants cost_i, paid_i, unpaid_i, received_i.
struct TrustGame {
  Smg game;
  StateId initial = 0;
  std::vector<TrustState> states;
  TrustParams params;
};

TrustGame build_trust_game(const TrustParams& p);

/// Providers share iff their own direct trust is strictly below every other
/// provider's. Throws WrongScheme for automatic sharing.
Strategy heuristic_sharing_strategy(const TrustGame& tg);

}  // namespace smgcheck
