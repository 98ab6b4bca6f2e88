#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "random_game.hpp"
#include "smgcheck/engine.hpp"
#include "smgcheck/oracle.hpp"
#include "smgcheck/qualitative.hpp"
#include "smgcheck/trust.hpp"

using namespace smgcheck;
using smgcheck::testing::error_kind;
using smgcheck::testing::same_value;

namespace {

CheckResult check_text(const Smg& g, const std::string& text, StateId initial = 0) {
  return check(g, initial, parse_formula(text, context_of(g)));
}

const char* const kStars[] = {"F0", "Fc", "Finf"};
const Star kStarValues[] = {Star::Zero, Star::Cumulative, Star::Infinite};

}  // namespace

TEST_SUITE("qualitative") {
  TEST_CASE("almost-sure reach includes targets and excludes sinks") {
    Smg g = testing::parse_model(R"(player 0 p
state 0 0
state 1 0
state 2 0
trans 0 a 2:1
trans 1 a 1:1
label "goal" 1
)");
    StateSet win = almost_sure_reach(g, {0}, {1});
    CHECK(win == StateSet{1});
  }

  TEST_CASE("almost-sure reach through a probabilistic retry") {
    Smg g = testing::parse_model(testing::kGeometric);
    CHECK(almost_sure_reach(g, {0}, {1}) == StateSet{0, 1});
  }

  TEST_CASE("adversary can prevent almost-sure reach") {
    Smg g = testing::parse_model(R"(player 0 p
player 1 q
state 0 1
state 1 0
state 2 0
trans 0 a 1:1
trans 0 b 2:1
label "goal" 1
)");
    CHECK(almost_sure_reach(g, {0}, {1}) == StateSet{1});
    CHECK(almost_sure_reach(g, {1}, {1}) == StateSet{0, 1});
  }

  TEST_CASE("co-Buchi region of a trapped positive loop") {
    // State 0 belongs to the minimizer; its only way out of a rewarding
    // self-loop leads to a state where the maximizer loops forever on reward.
    Smg g = testing::parse_model(R"(player 0 max
player 1 min
state 0 1
state 1 0
state 2 0
trans 0 a 0:1
trans 0 b 1:1
trans 1 a 1:1
trans 1 b 2:1
label "goal" 2
reward "r" 0 a 1
reward "r" 1 a 1
)");
    Predecessors pred(g);
    std::vector<char> minimizer{1, 0, 0}, bad(g.num_choices(), 0), target{0, 0, 1};
    bad[g.choice(0, 0)] = 1;
    bad[g.choice(1, 0)] = 1;
    CoBuchi cb = almost_sure_cobuchi(g, pred, minimizer, bad, target);
    CHECK(cb.win == std::vector<char>{0, 0, 1});
    CHECK(cb.escape[1] == g.choice(1, 0));
  }

  TEST_CASE("finitely many rewards are harmless") {
    Smg g = testing::parse_model(R"(player 0 max
state 0 0
state 1 0
trans 0 a 0:1
trans 0 b 1:1
label "goal" 1
reward "r" 0 b 3
)");
    Predecessors pred(g);
    std::vector<char> minimizer{0, 0}, bad(g.num_choices(), 0), target{0, 1};
    bad[g.choice(0, 1)] = 1;
    CHECK(almost_sure_cobuchi(g, pred, minimizer, bad, target).win == std::vector<char>{1, 1});
  }
}

TEST_SUITE("engine") {
  TEST_CASE("target states have value one at any horizon") {
    Smg g = testing::parse_model(testing::kMicroGame);
    for (unsigned n : {0u, 1u, 7u}) {
      Solution s = solve_prob(g, {0}, {1}, n, Optimum::Max);
      CHECK(s.values[1] == 1.0);
    }
    CHECK(solve_prob(g, {0}, {1}, std::nullopt, Optimum::Min).values[1] == 1.0);
  }

  TEST_CASE("one-step dominance") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Solution mx = solve_prob(g, {0}, {1}, std::nullopt, Optimum::Max);
    CHECK(mx.values[0] == doctest::Approx(0.7));
    CHECK(mx.strategy.choice(0) == std::size_t{1});
    Solution mn = solve_prob(g, {0}, {1}, std::nullopt, Optimum::Min);
    CHECK(mn.values[0] == doctest::Approx(0.3));
    CHECK(mn.strategy.choice(0) == std::size_t{0});
  }

  TEST_CASE("bound queries report the satisfying set") {
    Smg g = testing::parse_model(testing::kMicroGame);
    CheckResult r = check_text(g, R"(<<p1>> P>=0.75 [ F<=5 "goal" ])");
    CHECK(r.holds == false);
    CHECK(r.satisfying == StateSet{1});
    CheckResult t = check_text(g, R"(<<p1>> P>=0.7 [ F "goal" ])");
    CHECK(t.holds == true);
    CHECK(t.satisfying == StateSet{0, 1});
  }

  TEST_CASE("geometric reward") {
    Smg g = testing::parse_model(testing::kGeometric);
    for (const char* star : kStars) {
      CheckResult r = check_text(g, std::string(R"(<<p1>> R{"r"}min=? [ )") + star + R"( "goal" ])");
      CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
    }
  }

  TEST_CASE("star semantics on paths that miss the target") {
    Smg g = testing::parse_model(R"(player 0 p
state 0 0
state 1 0
state 2 0
trans 0 a 2:1
trans 2 a 2:1
label "goal" 1
reward "r" 0 a 4
)");
    CHECK(check_text(g, R"(<<p>> R{"r"}min=? [ F0 "goal" ])").value == 0.0);
    CHECK(check_text(g, R"(<<p>> R{"r"}min=? [ Fc "goal" ])").value == 4.0);
    CHECK(check_text(g, R"(<<p>> R{"r"}min=? [ Finf "goal" ])").value == kInfinity);
  }

  TEST_CASE("cumulative reward diverges on a rewarding loop") {
    Smg g = testing::parse_model(R"(player 0 max
player 1 min
state 0 1
state 1 0
state 2 0
trans 0 a 0:1
trans 0 b 1:1
trans 1 a 1:1
trans 1 b 2:1
label "goal" 2
reward "r" 0 a 1
reward "r" 1 a 1
)");
    CheckResult r = check_text(g, R"(<<max>> R{"r"}max=? [ Fc "goal" ])");
    CHECK(r.values[0] == kInfinity);
    CHECK(r.values[1] == kInfinity);
    CHECK(r.strategy.choice(1) == std::size_t{0});
  }

  TEST_CASE("errors") {
    Smg g = testing::parse_model(testing::kGeometric);
    CHECK(error_kind([&] { solve_prob(g, {0}, {}, std::nullopt, Optimum::Max); }) == ErrorKind::BadTarget);
    CHECK(error_kind([&] { solve_prob(g, {0}, {9}, std::nullopt, Optimum::Max); }) == ErrorKind::BadTarget);
    CHECK(error_kind([&] { solve_reward(g, {0}, "nope", {1}, Star::Cumulative, Optimum::Max); }) ==
          ErrorKind::UnknownReward);
  }

  TEST_CASE("evaluation under an empty-coalition strategy equals checking") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Formula f = parse_formula(R"(<<p1>> Pmax=? [ F "goal" ])", context_of(g));
    CheckResult a = check(g, 0, f);
    CheckResult b = evaluate_under(g, Strategy::memoryless({}, g.num_states()), 0, f);
    CHECK(a.values.values == b.values.values);
    Strategy overlap = Strategy::memoryless({0}, g.num_states());
    overlap.set(0, 0);
    CHECK(error_kind([&] { evaluate_under(g, overlap, 0, f); }) == ErrorKind::BadParameter);
  }

  TEST_CASE("values CSV") {
    std::ostringstream out;
    write_values_csv(out, {ValueKind::Reward, {1.5, kInfinity}});
    CHECK(out.str() == "state,value\n0,1.5\n1,inf\n");
  }

  TEST_CASE("random games: agreement with exhaustive enumeration") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 200; ++it) {
      Smg g = testing::random_game(rng);
      const StateSet goal = *g.label("goal");
      for (Optimum opt : {Optimum::Max, Optimum::Min}) {
        auto prob = solve_prob(g, {0}, goal, std::nullopt, opt).values;
        auto expect = oracle::brute_force_value(g, {0}, {goal, std::nullopt, Star::Cumulative}, opt);
        for (StateId s = 0; s < g.num_states(); ++s) REQUIRE(same_value(prob[s], expect[s], 1e-6));
        for (Star star : {Star::Cumulative, Star::Infinite}) {
          auto rew = solve_reward(g, {0}, "r", goal, star, opt).values;
          auto ref = oracle::brute_force_value(g, {0}, {goal, "r", star}, opt);
          for (StateId s = 0; s < g.num_states(); ++s) REQUIRE(same_value(rew[s], ref[s], 1e-6));
        }
      }
    }
  }

  TEST_CASE("random games: witnesses achieve the reported values") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 150; ++it) {
      Smg g = testing::random_game(rng);
      const StateSet goal = *g.label("goal");
      for (Optimum opt : {Optimum::Max, Optimum::Min}) {
        const std::string query = opt == Optimum::Max ? "max=?" : "min=?";
        std::vector<std::pair<std::string, std::string>> cases{
            {"<<p0>> P" + query + " [ F \"goal\" ]", "<<>> P" + query + " [ F \"goal\" ]"}};
        for (const char* star : {"Fc", "Finf"}) {
          cases.push_back({"<<p0>> R{\"r\"}" + query + " [ " + star + " \"goal\" ]",
                           "<<>> R{\"r\"}" + query + " [ " + star + " \"goal\" ]"});
        }
        for (const auto& [synth, eval] : cases) {
          CheckResult r = check_text(g, synth);
          CheckResult w = evaluate_under(g, r.strategy, 0, parse_formula(eval, context_of(g)));
          for (StateId s = 0; s < g.num_states(); ++s) {
            REQUIRE_MESSAGE(same_value(r.values[s], w.values[s], 1e-7), synth);
          }
        }
      }
    }
  }

  TEST_CASE("random games: bounded values grow with the horizon") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 100; ++it) {
      Smg g = testing::random_game(rng);
      const StateSet goal = *g.label("goal");
      auto unbounded = solve_prob(g, {0}, goal, std::nullopt, Optimum::Max).values;
      std::vector<double> prev(g.num_states(), 0.0);
      for (unsigned n = 0; n <= 12; ++n) {
        auto v = solve_prob(g, {0}, goal, n, Optimum::Max).values;
        for (StateId s = 0; s < g.num_states(); ++s) {
          CHECK(v[s] >= prev[s] - 1e-12);
          CHECK(v[s] <= unbounded[s] + 1e-7);
          CHECK(v[s] >= 0.0);
          CHECK(v[s] <= 1.0);
        }
        prev = v.values;
      }
    }
  }

  TEST_CASE("random games: adversary best response reproduces the value") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 100; ++it) {
      Smg g = testing::random_game(rng);
      const StateSet goal = *g.label("goal");
      Solution s = solve_prob(g, {0}, goal, std::nullopt, Optimum::Max);
      Smg fixed = induced_game(g, s.adversary);
      auto v = solve_prob(fixed, {0}, goal, std::nullopt, Optimum::Max).values;
      for (StateId x = 0; x < g.num_states(); ++x) CHECK(same_value(v[x], s.values[x], 1e-7));
    }
  }

  TEST_CASE("random games: cumulative reward lies below infinite-star reward") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 200; ++it) {
      Smg g = testing::random_game(rng);
      const StateSet goal = *g.label("goal");
      for (Optimum opt : {Optimum::Max, Optimum::Min}) {
        auto c = solve_reward(g, {0}, "r", goal, Star::Cumulative, opt).values;
        auto inf = solve_reward(g, {0}, "r", goal, Star::Infinite, opt).values;
        for (StateId s = 0; s < g.num_states(); ++s) CHECK(c[s] <= inf[s] + 1e-7);
      }
    }
  }

  TEST_CASE("trust game: initial state reaches one service almost surely") {
    TrustParams p;
    p.k = 1;
    TrustGame tg = build_trust_game(p);
    Coalition requester = resolve_coalition(tg.game, {"requester"});
    StateSet win = almost_sure_reach(tg.game, requester, *tg.game.label("got_1"));
    CHECK(std::binary_search(win.begin(), win.end(), tg.initial));
    Solution bounded = solve_prob(tg.game, requester, *tg.game.label("got_1"), 1000u, Optimum::Max);
    CHECK(bounded.values[tg.initial] >= 1.0 - 1e-6);
    auto exact = oracle::brute_force_value(tg.game, requester, {*tg.game.label("got_1"), std::nullopt,
                                                                 Star::Cumulative}, Optimum::Max);
    CHECK(exact[tg.initial] == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("trust game: the initial state satisfies reaching got_0") {
    TrustParams p;
    p.k = 2;
    TrustGame tg = build_trust_game(p);
    CHECK(check(tg.game, tg.initial, parse_formula(R"(<<>> P>=1 [ F "got_0" ])", context_of(tg.game))).holds ==
          true);
  }
}
