#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "random_game.hpp"
#include "smgcheck/engine.hpp"
#include "smgcheck/oracle.hpp"
#include "smgcheck/trust.hpp"

using namespace smgcheck;
using smgcheck::testing::error_kind;
using smgcheck::testing::same_value;

TEST_SUITE("oracle") {
  TEST_CASE("profile counting") {
    Smg two = testing::parse_model(R"(player 0 a
player 1 b
state 0 0
state 1 1
trans 0 x 1:1
trans 0 y 0:1
trans 1 x 0:1
trans 1 y 1:1
)");
    CHECK(oracle::count_profiles(two) == 4);
    CHECK(oracle::enumerate_profiles(two, {0}).size() == 4);
    Smg one = testing::parse_model("player 0 a\nstate 0 0\ntrans 0 x 0:1\n");
    CHECK(oracle::enumerate_profiles(one, {0}).size() == 1);
  }

  TEST_CASE("enumeration is exhaustive, ordered and duplicate-free") {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 50; ++it) {
      Smg g = testing::random_game(rng);
      std::size_t product = 1;
      for (StateId s = 0; s < g.num_states(); ++s) product *= g.num_actions(s);
      auto profiles = oracle::enumerate_profiles(g, {0});
      CHECK(oracle::count_profiles(g) == product);
      REQUIRE(profiles.size() == product);
      std::vector<oracle::Profile> flat;
      for (const auto& [a, b] : profiles) flat.push_back(oracle::combine(a, b));
      auto sorted = flat;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
  }

  TEST_CASE("profile cap") {
    std::string text = "player 0 a\n";
    for (int s = 0; s < 25; ++s) text += "state " + std::to_string(s) + " 0\n";
    for (int s = 0; s < 25; ++s) {
      text += "trans " + std::to_string(s) + " x " + std::to_string(s) + ":1\n";
      text += "trans " + std::to_string(s) + " y " + std::to_string(s) + ":1\n";
    }
    Smg g = testing::parse_model(text);
    CHECK(error_kind([&] { oracle::enumerate_profiles(g, {0}); }) == ErrorKind::TooLarge);
    CHECK(error_kind([&] { oracle::brute_force_value(g, {0}, {{0}, std::nullopt, Star::Cumulative}, Optimum::Max); }) ==
          ErrorKind::TooLarge);
  }

  TEST_CASE("chain evaluation") {
    Smg step = testing::parse_model("player 0 a\nstate 0 0\nstate 1 0\ntrans 0 x 1:1\nreward \"r\" 0 x 3\n");
    auto p = oracle::evaluate_chain(step, {0, 0}, {{1}, std::nullopt, Star::Cumulative});
    CHECK(p[0] == 1.0);
    auto r = oracle::evaluate_chain(step, {0, 0}, {{1}, "r", Star::Cumulative});
    CHECK(r[0] == 3.0);
    CHECK(r[1] == 0.0);

    Smg geo = testing::parse_model(testing::kGeometric);
    for (Star star : {Star::Zero, Star::Cumulative, Star::Infinite}) {
      CHECK(oracle::evaluate_chain(geo, {0, 0}, {{1}, "r", star})[0] == 2.0);
      CHECK(oracle::evaluate_chain(geo, {0, 0}, {{1}, "r", star}, 0)[0] == doctest::Approx(2.0));
    }

    Smg sink = testing::parse_model(R"(player 0 a
state 0 0
state 1 0
state 2 0
trans 0 x 2:0.5 1:0.5
trans 2 x 2:1
label "goal" 1
reward "r" 0 x 1
)");
    CHECK(oracle::evaluate_chain(sink, {0, 0, 0}, {{1}, "r", Star::Infinite})[0] == kInfinity);
    CHECK(oracle::evaluate_chain(sink, {0, 0, 0}, {{1}, "r", Star::Cumulative})[0] == 1.0);
    CHECK(oracle::evaluate_chain(sink, {0, 0, 0}, {{1}, "r", Star::Zero})[0] == 0.5);
    CHECK(oracle::evaluate_chain(sink, {0, 0, 0}, {{1}, std::nullopt, Star::Cumulative})[0] == 0.5);

    Smg loop = testing::parse_model(R"(player 0 a
state 0 0
state 1 0
state 2 0
trans 0 x 2:0.5 1:0.5
trans 2 x 2:1
label "goal" 1
reward "r" 2 x 1
)");
    CHECK(oracle::evaluate_chain(loop, {0, 0, 0}, {{1}, "r", Star::Cumulative})[0] == kInfinity);
  }

  TEST_CASE("exact and floating evaluation agree") {
    std::mt19937_64 rng(14);
    for (int it = 0; it < 200; ++it) {
      Smg g = testing::random_game(rng);
      oracle::Profile profile(g.num_states(), 0);
      for (StateId s = 0; s < g.num_states(); ++s) profile[s] = rng() % g.num_actions(s);
      for (Star star : {Star::Zero, Star::Cumulative, Star::Infinite}) {
        oracle::Objective obj{*g.label("goal"), "r", star};
        auto exact = oracle::evaluate_chain(g, profile, obj);
        auto approx = oracle::evaluate_chain(g, profile, obj, 0);
        for (StateId s = 0; s < g.num_states(); ++s) CHECK(same_value(exact[s], approx[s], 1e-9));
      }
    }
  }

  TEST_CASE("brute force on trivial games") {
    Smg g = testing::parse_model(testing::kGeometric);
    auto v = oracle::brute_force_value(g, {0}, {{1}, "r", Star::Cumulative}, Optimum::Max);
    CHECK(v.values == oracle::evaluate_chain(g, {0, 0}, {{1}, "r", Star::Cumulative}).values);
    Smg micro = testing::parse_model(testing::kMicroGame);
    CHECK(oracle::brute_force_value(micro, {0}, {{1}, std::nullopt, Star::Cumulative}, Optimum::Max)[0] ==
          doctest::Approx(0.7));
    CHECK(oracle::brute_force_value(micro, {0}, {{1}, std::nullopt, Star::Cumulative}, Optimum::Min)[0] ==
          doctest::Approx(0.3));
  }

  TEST_CASE("the game value dominates every fixed coalition strategy") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 60; ++it) {
      Smg g = testing::random_game(rng);
      oracle::Objective obj{*g.label("goal"), std::nullopt, Star::Cumulative};
      auto value = oracle::brute_force_value(g, {0}, obj, Optimum::Max);
      for (const auto& [mine, theirs] : oracle::enumerate_profiles(g, {0})) {
        auto response = oracle::brute_force_value(induced_game(g, mine), {0}, obj, Optimum::Max);
        for (StateId s = 0; s < g.num_states(); ++s) CHECK(value[s] >= response[s] - 1e-12);
      }
    }
  }

  TEST_CASE("small trust game agrees with the engine") {
    TrustParams p;
    p.k = 2;
    p.n_providers = 2;
    TrustGame tg = build_trust_game(p);
    Coalition requester = resolve_coalition(tg.game, {"requester"});
    const StateSet& target = *tg.game.label("got_k");
    for (Star star : {Star::Cumulative, Star::Infinite}) {
      auto exact = oracle::brute_force_value(tg.game, requester, {target, "cost", star}, Optimum::Min);
      auto engine = solve_reward(tg.game, requester, "cost", target, star, Optimum::Min).values;
      for (StateId s = 0; s < tg.game.num_states(); ++s) CHECK(same_value(exact[s], engine[s], 1e-6));
    }
    auto unpaid = oracle::brute_force_value(tg.game, requester, {target, "unpaid", Star::Cumulative}, Optimum::Max);
    auto engine = solve_reward(tg.game, requester, "unpaid", target, Star::Cumulative, Optimum::Max).values;
    for (StateId s = 0; s < tg.game.num_states(); ++s) CHECK(same_value(unpaid[s], engine[s], 1e-6));
    CHECK(unpaid[tg.initial] <= p.k);
  }
}
