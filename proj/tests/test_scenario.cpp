#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gray/scenario.hpp"

using namespace gray;

namespace {

const char* kSample = R"(# sample
horizon 5
window 4

tower t {
  stage 1 rank 1
  stage 2 rank 1 torsion 2
  bond 1 {
    3 0
  }
}

class alpha 2:1 3^2:2

ses s {
  sub zero
  total t2
  quotient t2
}
)";

}  // namespace

TEST_CASE("parse picks up globals, towers, and classes") {
  std::string text = kSample;
  // drop the ses block (references towers that are not in this sample)
  text.erase(text.find("ses s"));
  Scenario s = parse_scenario(text);
  CHECK(s.horizon == 5);
  CHECK(s.window == 4);
  REQUIRE(s.towers.size() == 1);
  const Tower& t = s.towers[0].second;
  CHECK(t.horizon() == 2);
  CHECK(t.stage(1) == FgAbGroup::free_abelian(1));
  CHECK(t.stage(2) == FgAbGroup(1, {Int(2)}));
  CHECK(t.bond(1).matrix()(0, 0) == 3);
  REQUIRE(s.classes.size() == 1);
  CHECK(s.classes[0].first == "alpha");
  CHECK(print_class_literal(s.classes[0].second) == "2:1 3^2:2");
}

TEST_CASE("print-parse round trip is the identity on canonical form") {
  std::string text = kSample;
  text.erase(text.find("ses s"));
  Scenario s = parse_scenario(text);
  std::string canon = print_scenario(s);
  CHECK(print_scenario(parse_scenario(canon)) == canon);

  // the same holds for builtin towers of various shapes
  for (int h : {1, 2, 5, 9}) {
    for (const char* name : {"primorial", "times2", "constant"}) {
      Scenario one;
      one.towers.emplace_back(name, *builtins::make(name, h));
      std::string c = print_scenario(one);
      CHECK(print_scenario(parse_scenario(c)) == c);
    }
  }
}

TEST_CASE("ses blocks materialize to validated sequences") {
  std::string text = R"(
tower zero {
  stage 1 rank 0
  stage 2 rank 0
  bond 1 {
  }
}

tower t2 {
  stage 1 rank 0 torsion 2
  stage 2 rank 0 torsion 2
  bond 1 {
    1
  }
}

ses s {
  sub zero
  total t2
  quotient t2
  inject 1 {
  }
  inject 2 {
  }
  project 1 {
    1
  }
  project 2 {
    1
  }
}
)";
  Scenario s = parse_scenario(text);
  TowerSES ses = s.materialize_ses("s");
  CHECK(ses.horizon() == 2);
  CHECK(six_term_check(ses).all_verified());
  std::string canon = print_scenario(s);
  CHECK(print_scenario(parse_scenario(canon)) == canon);
  CHECK_THROWS_AS(s.materialize_ses("nope"), std::invalid_argument);
}

TEST_CASE("class literal parsing and normalization") {
  CHECK(print_class_literal(parse_class_literal("2:1,3:2")) == "2:1 3:2");
  // prime-power head
  CHECK(print_class_literal(parse_class_literal("4:1")) == "2^2:1");
  CHECK(print_class_literal(parse_class_literal("9:2")) == "3^2:2");
  // numerators reduce mod p^e and cancel powers of p
  CHECK(print_class_literal(parse_class_literal("2:5")) == "2:1");
  CHECK(print_class_literal(parse_class_literal("2^2:2")) == "2:1");
  CHECK(print_class_literal(parse_class_literal("2:4")) == "");
  CHECK(print_class_literal(parse_class_literal("2:-1")) == "2:1");
  // sorting
  CHECK(print_class_literal(parse_class_literal("5:1,2:1")) == "2:1 5:1");

  CHECK(parse_class_literal("7:3").min_window() == 4);
  CHECK(parse_class_literal("").min_window() == 1);

  PruferClass c = parse_class_literal("2:1,3:2").materialize(PrimeWindow::first(3));
  CHECK(c.representative().coord(1) == PruferCoord{1, 1});
  CHECK(c.representative().coord(2) == PruferCoord{2, 1});
  CHECK(c.representative().coord(3).is_zero());
  CHECK_THROWS_AS(parse_class_literal("7:3").materialize(PrimeWindow::first(2)),
                  std::invalid_argument);

  CHECK_THROWS_AS(parse_class_literal("6:1"), ScenarioError);   // not p^e
  CHECK_THROWS_AS(parse_class_literal("2:1,2:1"), ScenarioError);
  CHECK_THROWS_AS(parse_class_literal("2"), ScenarioError);
  CHECK_THROWS_AS(parse_class_literal("x:1"), ScenarioError);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_scenario(text);
    } catch (const ScenarioError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("horizon 2\nbogus 1\n") == 2);
  CHECK(line_of("tower t {\n  stage 1 rank 1\n  stage 3 rank 1\n}\n") == 3);
  CHECK(line_of("tower t {\n  stage 1 rank 1\n") == 1);  // missing brace
  CHECK(line_of("tower t {\n  stage 1 rank 1\n  stage 2 rank 1\n"
                "  bond 1 {\n    1 1\n  }\n}\n") == 5);  // wrong row width
  CHECK(line_of("horizon x\n") == 1);
  // non-homomorphism bond: Z/2 -> Z/4 sending the generator to a generator
  CHECK(line_of("tower t {\n  stage 1 rank 0 torsion 4\n"
                "  stage 2 rank 0 torsion 2\n  bond 1 {\n    1\n  }\n}\n") == 1);
}

TEST_CASE("builtin towers") {
  Tower p = builtins::primorial_tower(4);
  FiltrationReport r = image_filtration(p, 1);
  IntVec v(1);
  v(0) = 30;
  CHECK(r.chain[3].contains(v));
  CHECK(builtins::times2_tower(3).bond(1).matrix()(0, 0) == 2);
  CHECK(builtins::constant_tower(2).stage(1) == FgAbGroup::cyclic(6));
  CHECK(!builtins::make("nope", 3).has_value());
}
