#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "random_game.hpp"
#include "smgcheck/model_io.hpp"
#include "smgcheck/smg.hpp"

using namespace smgcheck;
using smgcheck::testing::error_kind;

TEST_SUITE("smg") {
  TEST_CASE("deadlocked state gets a zero-reward loop") {
    GameBuilder b;
    b.add_player("p");
    b.add_state(0);
    b.declare_reward("r");
    Smg g = std::move(b).build();
    REQUIRE(g.num_actions(0) == 1);
    ChoiceId c = g.choice(0, 0);
    CHECK(g.action_label(c) == "loop");
    REQUIRE(g.transitions(c).size() == 1);
    CHECK(g.transitions(c)[0].target == 0);
    CHECK(g.transitions(c)[0].probability == 1.0);
    CHECK(g.reward("r")->at(c) == 0.0);
  }

  TEST_CASE("distribution validation") {
    auto build = [](Distribution d) {
      GameBuilder b;
      b.add_player("p");
      for (int i = 0; i < 3; ++i) b.add_state(0);
      b.add_action(0, "a", std::move(d));
      return std::move(b).build();
    };
    CHECK_FALSE(error_kind([&] { build({{1, 0.6}, {2, 0.4}}); }));
    CHECK(error_kind([&] { build({{1, 0.6}, {2, 0.6}}); }) == ErrorKind::BadDistribution);
    CHECK(error_kind([&] { build({{1, 1.0}, {2, 0.0}}); }) == ErrorKind::BadDistribution);
    CHECK(error_kind([&] { build({{1, 0.5}, {1, 0.5}}); }) == ErrorKind::BadDistribution);
    CHECK(error_kind([&] { build({{7, 1.0}}); }) == ErrorKind::DanglingReference);
    CHECK_FALSE(error_kind([&] { build({{1, 0.6 + 5e-10}, {2, 0.4}}); }));
  }

  TEST_CASE("label and reward names are unique") {
    GameBuilder b;
    b.add_player("p");
    b.add_state(0);
    b.add_label("x", {0});
    CHECK(error_kind([&] { b.add_label("x", {0}); }) == ErrorKind::DuplicateName);
    CHECK(error_kind([&] { b.declare_reward("x"); }) == ErrorKind::DuplicateName);
  }

  TEST_CASE("induced game keeps only the chosen action") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Strategy sigma = Strategy::memoryless({0}, g.num_states());
    sigma.set(0, 0);
    Smg h = induced_game(g, sigma);
    REQUIRE(h.num_actions(0) == 1);
    CHECK(h.action_label(h.choice(0, 0)) == "a");
    CHECK(h.transitions(h.choice(0, 0))[0].probability == doctest::Approx(0.3));
  }

  TEST_CASE("induced game with an empty coalition is the same game") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Smg h = induced_game(g, Strategy::memoryless({}, g.num_states()));
    std::ostringstream a, b;
    write_model(a, g);
    write_model(b, h);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("induced game rejects missing and disabled choices") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Strategy missing = Strategy::memoryless({0}, g.num_states());
    CHECK(error_kind([&] { induced_game(g, missing); }) == ErrorKind::UndefinedChoice);
    Strategy disabled = Strategy::memoryless({0}, g.num_states());
    disabled.set(0, 5);
    CHECK(error_kind([&] { induced_game(g, disabled); }) == ErrorKind::DisabledAction);
  }

  TEST_CASE("step-indexed strategies induce a counter product") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Strategy sigma = Strategy::step_indexed({0}, g.num_states(), 2);
    sigma.set(0, 1, 0);
    sigma.set(0, 2, 1);
    Smg h = induced_game(g, sigma);
    CHECK(h.num_states() >= 2 * g.num_states());
    CHECK(h.num_actions(0) == 1);
    CHECK(h.action_label(h.choice(0, 0)) == "b");
  }

  TEST_CASE("reachable fragment drops unreachable states") {
    Smg g = testing::parse_model(R"(player 0 p
state 0 0
state 1 0
state 2 0
trans 0 a 1:1
trans 1 a 0:1
trans 2 a 0:1
label "x" 1 2
)");
    Fragment f = reachable_fragment(g, 0);
    CHECK(f.game.num_states() == 2);
    CHECK(f.original == std::vector<StateId>{0, 1});
    CHECK(*f.game.label("x") == StateSet{1});
  }

  TEST_CASE("reachable fragment of a connected game is the game") {
    Smg g = testing::parse_model(testing::kGeometric);
    Fragment f = reachable_fragment(g, 0);
    std::ostringstream a, b;
    write_model(a, g);
    write_model(b, f.game);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("random games: validity, induced games and fragment idempotence") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
      Smg g = testing::random_game(rng);
      for (StateId s = 0; s < g.num_states(); ++s) {
        REQUIRE(g.num_actions(s) >= 1);
        for (ChoiceId c = g.first_choice(s); c < g.end_choice(s); ++c) {
          double sum = 0.0;
          for (const auto& t : g.transitions(c)) sum += t.probability;
          CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
      }
      Strategy sigma = Strategy::memoryless({0}, g.num_states());
      for (StateId s = 0; s < g.num_states(); ++s) {
        if (g.owner(s) == 0) sigma.set(s, g.num_actions(s) - 1);
      }
      Smg h = induced_game(g, sigma);
      for (StateId s = 0; s < g.num_states(); ++s) {
        if (g.owner(s) == 0) continue;
        REQUIRE(h.num_actions(s) == g.num_actions(s));
        for (std::size_t a = 0; a < g.num_actions(s); ++a) {
          auto x = g.transitions(g.choice(s, a));
          auto y = h.transitions(h.choice(s, a));
          REQUIRE(x.size() == y.size());
          for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i].target == y[i].target);
            CHECK(x[i].probability == y[i].probability);
          }
        }
      }
      Fragment once = reachable_fragment(g, 0);
      Fragment twice = reachable_fragment(once.game, 0);
      std::ostringstream a, b;
      write_model(a, once.game);
      write_model(b, twice.game);
      CHECK(a.str() == b.str());
    }
  }
}

TEST_SUITE("model_io") {
  TEST_CASE("text format round-trips") {
    Smg g = testing::parse_model(testing::kGeometric);
    std::ostringstream out;
    write_model(out, g);
    Smg h = testing::parse_model(out.str());
    std::ostringstream again;
    write_model(again, h);
    CHECK(out.str() == again.str());
    CHECK(h.reward("r")->at(h.choice(0, 0)) == 1.0);
    CHECK(h.initial() == StateId{0});
  }

  TEST_CASE("comments and blank lines are ignored") {
    Smg g = testing::parse_model("# header\nplayer 0 p\n\nstate 0 0 # trailing\n");
    CHECK(g.num_states() == 1);
  }

  TEST_CASE("malformed input is reported") {
    CHECK(error_kind([] { testing::parse_model("player 0 p\nstate 0 0\nbogus\n"); }) == ErrorKind::SyntaxError);
    CHECK(error_kind([] { testing::parse_model("player 0 p\nstate 0 3\n"); }) == ErrorKind::DanglingReference);
    CHECK(error_kind([] { testing::parse_model("player 0 p\nstate 0 0\ntrans 0 a 1:1\n"); }) ==
          ErrorKind::DanglingReference);
    CHECK(error_kind([] { testing::parse_model("player 0 p\nstate 0 0\ntrans 0 a 0:0.5\n"); }) ==
          ErrorKind::BadDistribution);
  }

  TEST_CASE("strategy CSV round-trips") {
    Smg g = testing::parse_model(testing::kMicroGame);
    Strategy sigma = Strategy::memoryless({0}, g.num_states());
    sigma.set(0, 1);
    std::ostringstream out;
    write_strategy_csv(out, g, sigma);
    CHECK(out.str() == "state,step,action\n0,-,b\n");
    std::istringstream in(out.str());
    CHECK(read_strategy_csv(in, g) == sigma);
  }

  TEST_CASE("numbers print shortest and infinity as inf") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  }
}
