#include "smgcheck/trust.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <unordered_map>

#include <boost/rational.hpp>

#include "smgcheck/error.hpp"
#include "smgcheck/model_io.hpp"

namespace smgcheck {

namespace {

using Rational = boost::rational<long long>;

Rational exact(double x) {
  constexpr long long kDen = 1'000'000;
  return Rational(std::llround(x * static_cast<double>(kDen)), kDen);
}

void check_provider(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i) {
  if (i >= trust.size() || trust.size() != p.n_providers) {
    throw Error(ErrorKind::BadProvider, "provider " + std::to_string(i) + " of " + std::to_string(trust.size()));
  }
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::BadParameter, "invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T parse_as(std::string_view key, std::string_view text) {
  std::string v = trim(text);
  T out{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, text);
  return out;
}

unsigned parse_td(std::string_view key, std::string_view text) {
  std::string v = trim(text);
  if (v == "inf" || v == "infinity") return kTdReset;
  unsigned td = parse_as<unsigned>(key, v);
  if (td == kTdReset) bad_value(key, text);
  return td;
}

template <typename T, typename F>
std::vector<T> parse_list(std::string_view text, F item) {
  std::vector<T> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    out.push_back(item(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_td(unsigned td) { return td == kTdReset ? "inf" : std::to_string(td); }

std::string_view to_string(Pricing p) { return p == Pricing::Original ? "original" : "max-difference"; }
std::string_view to_string(Sharing s) { return s == Sharing::Automatic ? "automatic" : "strategic"; }

void validate(const TrustParams& p) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::BadParameter, what); };
  if (p.n_providers == 0 || p.n_providers > 15) fail("n_providers must be in 1..15");
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) fail("alpha must be in [0,1]");
  auto sized = [&](std::size_t n, const char* name) {
    if (n != 1 && n != p.n_providers) fail(std::string(name) + " needs 1 or n_providers entries");
  };
  sized(p.td.size(), "td");
  sized(p.st.size(), "st");
  sized(p.c.size(), "c");
  if (p.trust_max == 0 || p.trust_max > 1000) fail("trust_max must be in 1..1000");
  for (std::size_t i = 0; i < p.n_providers; ++i) {
    if (!(p.st_of(i) >= 0.0 && p.st_of(i) <= p.trust_max)) fail("st must be in [0, trust_max]");
    if (!(p.c_of(i) >= 0.0 && p.c_of(i) < 1.0)) fail("c must be in [0,1)");
  }
  if (!(p.c_min >= 0.0 && p.c_min <= p.c_max) || !std::isfinite(p.c_max)) fail("need 0 <= c_min <= c_max");
  if (!(p.t_prime > 0.0 && p.t_prime <= p.trust_max)) fail("t_prime must be in (0, trust_max]");
  if (p.trust_init > p.trust_max) fail("trust_init must be in [0, trust_max]");
  if (p.k == 0) fail("k must be at least 1");
}

void apply_setting(TrustParams& p, std::string_view raw_key, std::string_view value) {
  std::string key = trim(raw_key);
  std::string v = trim(value);
  if (key == "n_providers") {
    p.n_providers = parse_as<unsigned>(key, v);
  } else if (key == "alpha") {
    p.alpha = parse_as<double>(key, v);
  } else if (key == "td") {
    p.td = parse_list<unsigned>(v, [&](std::string_view x) { return parse_td(key, x); });
  } else if (key == "st") {
    p.st = parse_list<double>(v, [&](std::string_view x) { return parse_as<double>(key, x); });
  } else if (key == "c") {
    p.c = parse_list<double>(v, [&](std::string_view x) { return parse_as<double>(key, x); });
  } else if (key == "c_min") {
    p.c_min = parse_as<double>(key, v);
  } else if (key == "c_max") {
    p.c_max = parse_as<double>(key, v);
  } else if (key == "t_prime") {
    p.t_prime = parse_as<double>(key, v);
  } else if (key == "trust_init") {
    p.trust_init = parse_as<unsigned>(key, v);
  } else if (key == "trust_max") {
    p.trust_max = parse_as<unsigned>(key, v);
  } else if (key == "k") {
    p.k = parse_as<unsigned>(key, v);
  } else if (key == "max_states") {
    p.max_states = parse_as<std::size_t>(key, v);
  } else if (key == "pricing") {
    if (v == "original") {
      p.pricing = Pricing::Original;
    } else if (v == "max-difference") {
      p.pricing = Pricing::MaxDifference;
    } else {
      bad_value(key, value);
    }
  } else if (key == "sharing") {
    if (v == "automatic") {
      p.sharing = Sharing::Automatic;
    } else if (v == "strategic") {
      p.sharing = Sharing::Strategic;
    } else {
      bad_value(key, value);
    }
  } else {
    throw Error(ErrorKind::BadParameter, "unknown parameter '" + key + "'");
  }
}

TrustParams read_trust_config(std::istream& in, TrustParams base) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    text = text.substr(0, text.find('#'));
    if (trim(text).empty()) continue;
    auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::BadParameter, "line " + std::to_string(number) + ": expected key=value");
    }
    apply_setting(base, text.substr(0, eq), text.substr(eq + 1));
  }
  return base;
}

double trust_level(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i) {
  check_provider(p, trust, i);
  if (trust.size() == 1) return trust[0];
  double others = 0.0;
  for (std::size_t j = 0; j < trust.size(); ++j) {
    if (j != i) others += trust[j];
  }
  return p.alpha * trust[i] + (1.0 - p.alpha) * others / static_cast<double>(trust.size() - 1);
}

bool service_enabled(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i) {
  check_provider(p, trust, i);
  const Rational st = exact(p.st_of(i));
  if (trust.size() == 1) return Rational(trust[0]) >= st;
  const Rational alpha = exact(p.alpha);
  long long others = 0;
  for (std::size_t j = 0; j < trust.size(); ++j) {
    if (j != i) others += trust[j];
  }
  Rational level = alpha * static_cast<long long>(trust[i]) +
                   (Rational(1) - alpha) * Rational(others, static_cast<long long>(trust.size() - 1));
  return level >= st;
}

double service_cost(const TrustParams& p, const std::vector<unsigned>& trust, std::size_t i) {
  check_provider(p, trust, i);
  const double t = trust[i];
  double cost = t < p.t_prime ? p.c_min + (p.c_max - p.c_min) / p.t_prime * (p.t_prime - t) : p.c_min;
  if (p.pricing == Pricing::MaxDifference) {
    unsigned spread = 0;
    for (unsigned x : trust) spread = std::max(spread, x > trust[i] ? x - trust[i] : trust[i] - x);
    cost += spread;
  }
  return cost;
}

std::vector<bool> attack_feasible(const TrustParams& p) {
  std::vector<bool> out(p.n_providers);
  const Rational bound = (Rational(1) - exact(p.alpha)) * static_cast<long long>(p.trust_max);
  for (std::size_t i = 0; i < p.n_providers; ++i) out[i] = exact(p.st_of(i)) <= bound;
  return out;
}

std::string describe(const TrustState& s) {
  static constexpr const char* names[] = {"choose", "negotiate", "decidepay", "share", "done", "stuck"};
  std::string out = names[static_cast<int>(s.phase)];
  if (s.phase == Phase::Negotiate || s.phase == Phase::DecidePay || s.phase == Phase::Share) {
    out += "(" + std::to_string(s.provider + 1) + ")";
  }
  out += " services=" + std::to_string(s.services) + " trust=(";
  for (std::size_t i = 0; i < s.trust.size(); ++i) out += (i ? "," : "") + std::to_string(s.trust[i]);
  return out + ")";
}

namespace {

class Explorer {
 public:
  explicit Explorer(const TrustParams& p) : p_(p), n_(p.n_providers) {
    // Mixed-radix key: trust digits, then services, provider and phase.
    long double span = std::pow(static_cast<long double>(p.trust_max) + 1, n_) * (p.k + 1.0L) * (n_ + 1) * 6;
    if (span >= 9.2e18L) throw Error(ErrorKind::BadParameter, "parameters too large to encode states");
  }

  std::uint64_t key(const TrustState& s) const {
    std::uint64_t x = static_cast<std::uint64_t>(s.phase);
    x = x * (n_ + 1) + s.provider;
    x = x * (p_.k + 1) + s.services;
    for (unsigned t : s.trust) x = x * (p_.trust_max + 1) + t;
    return x;
  }

  StateId intern(const TrustState& s, GameBuilder& b) {
    auto [it, inserted] = ids_.try_emplace(key(s), static_cast<StateId>(states_.size()));
    if (inserted) {
      if (states_.size() >= p_.max_states) {
        throw Error(ErrorKind::StateExplosion,
                    "more than " + std::to_string(p_.max_states) + " reachable states");
      }
      PlayerId owner = (s.phase == Phase::Negotiate || s.phase == Phase::Share) ? s.provider + 1 : 0;
      b.add_state(owner);
      states_.push_back(s);
    }
    return it->second;
  }

  std::vector<TrustState>& states() { return states_; }

 private:
  const TrustParams& p_;
  unsigned n_;
  std::unordered_map<std::uint64_t, StateId> ids_;
  std::vector<TrustState> states_;
};

}  // namespace

TrustGame build_trust_game(const TrustParams& p) {
  validate(p);
  const unsigned n = p.n_providers;
  GameBuilder b;
  b.add_player("requester");
  for (unsigned i = 1; i <= n; ++i) b.add_player("provider_" + std::to_string(i));

  std::vector<std::string> names = {"cost", "paid", "unpaid", "received"};
  for (const char* base : {"cost", "paid", "unpaid", "received"}) {
    for (unsigned i = 1; i <= n; ++i) names.push_back(std::string(base) + "_" + std::to_string(i));
  }
  for (const auto& name : names) b.declare_reward(name);
  auto per = [](const char* base, unsigned i) { return std::string(base) + "_" + std::to_string(i + 1); };

  Explorer ex(p);
  TrustState init;
  init.trust.assign(n, p.trust_init);
  StateId initial = ex.intern(init, b);

  for (StateId id = 0; id < ex.states().size(); ++id) {
    const TrustState s = ex.states()[id];
    switch (s.phase) {
      case Phase::Choose: {
        bool any = false;
        for (unsigned i = 0; i < n; ++i) {
          if (!service_enabled(p, s.trust, i)) continue;
          TrustState next = s;
          next.phase = Phase::Negotiate;
          next.provider = i;
          b.add_action(id, "request_" + std::to_string(i + 1), {{ex.intern(next, b), 1.0}});
          any = true;
        }
        if (!any) {
          TrustState next{Phase::Stuck, 0, s.services, std::vector<unsigned>(n, 0)};
          b.add_action(id, "halt", {{ex.intern(next, b), 1.0}});
        }
        break;
      }
      case Phase::Negotiate: {
        const double cancel = p.c_of(s.provider);
        TrustState deliver = s;
        deliver.phase = Phase::DecidePay;
        deliver.services += 1;
        Distribution d;
        if (cancel > 0.0) {
          TrustState back = s;
          back.phase = Phase::Choose;
          back.provider = 0;
          d.push_back({ex.intern(back, b), cancel});
        }
        d.push_back({ex.intern(deliver, b), 1.0 - cancel});
        b.add_action(id, "negotiate", std::move(d));
        break;
      }
      case Phase::DecidePay: {
        const unsigned i = s.provider;
        auto after = [&](TrustState t) {
          if (t.services == p.k) {
            t.phase = Phase::Done;
            t.provider = 0;
            t.trust.assign(n, 0);
          } else if (p.sharing == Sharing::Strategic) {
            t.phase = Phase::Share;
          } else {
            t.phase = Phase::Choose;
            t.provider = 0;
          }
          return ex.intern(t, b);
        };
        TrustState paid = s;
        paid.trust[i] = std::min(p.trust_max, s.trust[i] + 1);
        const double cost = service_cost(p, s.trust, i);
        std::size_t pay = b.add_action(id, "pay", {{after(paid), 1.0}});
        b.set_reward("cost", pay, cost);
        b.set_reward(per("cost", i), pay, cost);
        b.set_reward("paid", pay, 1.0);
        b.set_reward(per("paid", i), pay, 1.0);
        b.set_reward("received", pay, 1.0);
        b.set_reward(per("received", i), pay, 1.0);

        TrustState unpaid = s;
        const unsigned td = p.td_of(i);
        unpaid.trust[i] = (td == kTdReset || td >= s.trust[i]) ? 0 : s.trust[i] - td;
        std::size_t nopay = b.add_action(id, "nopay", {{after(unpaid), 1.0}});
        b.set_reward("unpaid", nopay, 1.0);
        b.set_reward(per("unpaid", i), nopay, 1.0);
        b.set_reward("received", nopay, 1.0);
        b.set_reward(per("received", i), nopay, 1.0);
        break;
      }
      case Phase::Share: {
        TrustState shared = s;
        shared.phase = Phase::Choose;
        shared.provider = 0;
        TrustState kept = shared;
        for (unsigned j = 0; j < n; ++j) shared.trust[j] = s.trust[s.provider];
        b.add_action(id, "share", {{ex.intern(shared, b), 1.0}});
        b.add_action(id, "keep", {{ex.intern(kept, b), 1.0}});
        break;
      }
      case Phase::Done:
      case Phase::Stuck:
        break;
    }
  }

  const auto& states = ex.states();
  std::vector<StateSet> got(p.k + 1);
  StateSet done, stuck;
  for (StateId id = 0; id < states.size(); ++id) {
    const TrustState& s = states[id];
    // A delivered service counts once its payment decision is made.
    if (s.phase != Phase::DecidePay) got[s.services].push_back(id);
    if (s.phase == Phase::Done) done.push_back(id);
    if (s.phase == Phase::Stuck) stuck.push_back(id);
  }
  for (unsigned j = 0; j <= p.k; ++j) b.add_label("got_" + std::to_string(j), got[j]);
  b.add_label("got_k", got[p.k]);
  b.add_label("done", std::move(done));
  b.add_label("stuck", std::move(stuck));
  b.set_initial(initial);

  TrustGame out;
  out.states = std::move(ex.states());
  out.game = std::move(b).build();
  out.initial = initial;
  out.params = p;
  return out;
}

Strategy heuristic_sharing_strategy(const TrustGame& tg) {
  if (tg.params.sharing != Sharing::Strategic) {
    throw Error(ErrorKind::WrongScheme, "heuristic sharing needs a game built with sharing=strategic");
  }
  const Smg& g = tg.game;
  Coalition providers;
  for (PlayerId q = 1; q < g.num_players(); ++q) providers.push_back(q);
  Strategy sigma = Strategy::memoryless(providers, g.num_states());
  for (StateId id = 0; id < g.num_states(); ++id) {
    if (g.owner(id) == 0) continue;
    const TrustState& s = tg.states[id];
    std::size_t action = 0;
    if (s.phase == Phase::Share) {
      unsigned others = std::numeric_limits<unsigned>::max();
      for (std::size_t j = 0; j < s.trust.size(); ++j) {
        if (j != s.provider) others = std::min(others, s.trust[j]);
      }
      bool share = s.trust.size() > 1 && s.trust[s.provider] < others;
      action = *g.find_action(id, share ? "share" : "keep");
    }
    sigma.set(id, action);
  }
  return sigma;
}

}  // namespace smgcheck
