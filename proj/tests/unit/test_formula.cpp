#include <doctest.h>

#include <random>
#include <string>

#include "helpers.hpp"
#include "random_formula.hpp"
#include "smgcheck/error.hpp"
#include "smgcheck/formula.hpp"

using namespace smgcheck;
using smgcheck::testing::error_kind;
using smgcheck::testing::fuzz_input;
using smgcheck::testing::random_formula;

TEST_SUITE("formula") {
  TEST_CASE("bounded probability formula") {
    Formula f = parse_formula(R"(<<p1,p2>> P>=0.75 [ F<=5 "goal" ])");
    CHECK(f.coalition == std::vector<std::string>{"p1", "p2"});
    CHECK_FALSE(f.is_reward());
    CHECK(std::get<Bound>(f.query) == Bound{Relation::Ge, 0.75});
    CHECK(f.step_bound == 5u);
    CHECK(f.target == "goal");
  }

  TEST_CASE("reward formula with cumulative star") {
    Formula f = parse_formula(R"(<<requester>> R{"unpaid"}max=? [ Fc "got_k" ])");
    CHECK(f.coalition == std::vector<std::string>{"requester"});
    CHECK(f.reward == "unpaid");
    CHECK(std::get<Optimum>(f.query) == Optimum::Max);
    CHECK(f.star == Star::Cumulative);
    CHECK(f.target == "got_k");
  }

  TEST_CASE("probability bound above one is rejected") {
    CHECK(error_kind([] { parse_formula(R"(<<>> P>=1.5 [ F "goal" ])"); }) == ErrorKind::BadBound);
    CHECK(error_kind([] { parse_formula(R"(<<>> P>=-0.1 [ F "goal" ])"); }) == ErrorKind::BadBound);
    CHECK(error_kind([] { parse_formula(R"(<<>> R{"r"}<-1 [ Fc "goal" ])"); }) == ErrorKind::BadBound);
    CHECK_FALSE(error_kind([] { parse_formula(R"(<<>> R{"r"}<=12.5 [ Fc "goal" ])"); }));
  }

  TEST_CASE("canonical text") {
    CHECK(format_formula(parse_formula(R"(<<>>P max=?[F"goal"])")) == R"(<<>> Pmax=? [ F "goal" ])");
    CHECK(format_formula(parse_formula(R"(<<a>> R{"r"}min=? [ Finf "t" ])")) == R"(<<a>> R{"r"}min=? [ Finf "t" ])");
    for (const char* text :
         {R"(<<p1,p2>> P>=0.75 [ F<=5 "goal" ])", R"(<<requester>> R{"unpaid"}max=? [ Fc "got_k" ])"}) {
      Formula f = parse_formula(text);
      CHECK(format_formula(f) == text);
      CHECK(parse_formula(format_formula(f)) == f);
    }
  }

  TEST_CASE("names are checked against the context") {
    FormulaContext ctx;
    ctx.players = {{"p1"}};
    ctx.labels = {{"goal"}};
    ctx.rewards = {{"r"}};
    CHECK(error_kind([&] { parse_formula(R"(<<p9>> P>=0.5 [ F "goal" ])", ctx); }) == ErrorKind::UnknownPlayer);
    CHECK(error_kind([&] { parse_formula(R"(<<p1>> P>=0.5 [ F "nope" ])", ctx); }) == ErrorKind::UnknownLabel);
    CHECK(error_kind([&] { parse_formula(R"(<<p1>> R{"x"}max=? [ Fc "goal" ])", ctx); }) ==
          ErrorKind::UnknownReward);
    CHECK_FALSE(error_kind([&] { parse_formula(R"(<<p1>> R{"r"}max=? [ F0 "goal" ])", ctx); }));
  }

  TEST_CASE("syntax errors carry the offset") {
    try {
      parse_formula(R"(<<p1>> Q>=0.5 [ F "goal" ])");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 7);
    }
    try {
      parse_formula(R"(<<p1>> R{"r"}max=? [ F<=3 "goal" ])");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 21);
    }
    CHECK(error_kind([] { parse_formula(R"(<<p1>> P>=0.5 [ F "goal" ] extra)"); }) == ErrorKind::SyntaxError);
    CHECK(error_kind([] { parse_formula(""); }) == ErrorKind::SyntaxError);
  }

  TEST_CASE("random ASTs round-trip exactly") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
      Formula f = random_formula(rng);
      std::string text = format_formula(f);
      Formula g = parse_formula(text);
      REQUIRE_MESSAGE(g == f, text);
      CHECK(format_formula(g) == text);
    }
  }

  TEST_CASE("random bytes never crash the parser") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
      const std::string s = fuzz_input(rng, i);
      try {
        parse_formula(s);
      } catch (const SyntaxError& e) {
        CHECK(e.position() <= s.size());
      } catch (const Error& e) {
        CHECK(e.kind() != ErrorKind::SyntaxError);
      }
    }
  }
}
