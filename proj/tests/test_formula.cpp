#include <catch_amalgamated.hpp>

#include "stlta/formula.hpp"

using namespace stlta;

namespace {

const std::vector<std::string> kNames{"g1", "g2"};

Stl parse(const std::string& s) { return parse_stl(s, kNames); }

}  // namespace

TEST_CASE("reach-avoid formula parses into the expected tree") {
  const Stl f = parse("F[0,18](g1) & G[0,6](!g2)");
  const Stl expected = mk_and(mk_eventually(TimeInterval::closed(0, 18), mk_pred(0)),
                              mk_globally(TimeInterval::closed(0, 6), mk_not(mk_pred(1))));
  CHECK(structurally_equal(f, expected));
}

TEST_CASE("atomic formula") {
  CHECK(structurally_equal(parse("g1"), mk_pred(0)));
}

TEST_CASE("nested temporal operators are rejected") {
  CHECK_THROWS_AS(parse("F[0,5](G[0,2](g1))"), NestedTemporalError);
  CHECK_THROWS_AS(parse("g1 U[0,2] F[0,1](g2)"), NestedTemporalError);
  CHECK_THROWS_AS(parse("G[0,5](!F[0,2](g1))"), NestedTemporalError);
}

TEST_CASE("unknown predicate") {
  CHECK_THROWS_AS(parse("F[0,1](g3)"), UnknownPredicateError);
}

TEST_CASE("syntax errors report the position") {
  try {
    parse("F[0,1](g1) & ");
    FAIL("expected throw");
  } catch (const StlParseError& e) {
    CHECK(e.position() == 13);
  }
  CHECK_THROWS_AS(parse("F[2,1](g1)"), StlParseError);
  CHECK_THROWS_AS(parse("F[1,1)(g1)"), StlParseError);
  CHECK_THROWS_AS(parse("F[0,1](g1"), StlParseError);
}

TEST_CASE("interval brackets select endpoint kinds") {
  const Stl f = parse("F(6,18](g1)");
  CHECK(f->interval == TimeInterval{6, 18, false, true});
  const Stl g = parse("G[0,6)(g1)");
  CHECK(g->interval == TimeInterval{0, 6, true, false});
}

TEST_CASE("implication is sugar for a disjunction") {
  CHECK(structurally_equal(parse("g1 -> g2"), mk_or(mk_not(mk_pred(0)), mk_pred(1))));
}

TEST_CASE("precedence: & binds tighter than |, until tighter than &") {
  const Stl f = parse("g1 | g2 & g1 U[0,1] g2");
  REQUIRE(f->kind == NodeKind::Or);
  REQUIRE(f->children[1]->kind == NodeKind::And);
  CHECK(f->children[1]->children[1]->kind == NodeKind::Until);
}

TEST_CASE("print then parse round-trips") {
  const char* cases[] = {
      "F[0,18](g1) & G[0,6](!g2)",
      "(g1 | g2) & !(g1 & g2)",
      "g1 U(1,4] (g2 | !g1)",
      "G[0,2)(g1 -> g2) | F[2,10](g2 & g1)",
      "true & !false",
      "g1 S[3,3] g2",
  };
  for (const char* c : cases) {
    const Stl f = parse(c);
    const std::string s = to_string(f, kNames);
    INFO(c << " -> " << s);
    CHECK(structurally_equal(parse(s), f));
  }
}

TEST_CASE("horizon") {
  CHECK(formula_horizon(parse("F[0,18](g1) & G[0,6](!g2)")) == 18.0);
  CHECK(formula_horizon(parse("g1")) == 0.0);
  CHECK(formula_horizon(parse("F[2,10](g1) & G[0,2](g2) & G[0,10](g1 -> g2)")) == 10.0);
}

TEST_CASE("predicate evaluation uses h >= 0") {
  const std::vector<std::string> vars{"x", "y"};
  PredicateFn p{"p", Polynomial::parse("x - 3.5", vars)};
  const std::vector<double> a{4, 0}, b{3.5, 0}, c{3, 0};
  CHECK(eval_predicate(p, a));
  CHECK(eval_predicate(p, b));
  CHECK_FALSE(eval_predicate(p, c));

  PredicateFn red{"red", Polynomial::parse("2 - (x-5)^2 - (y-5)^2", vars)};
  const std::vector<double> centre{5, 5};
  CHECK(eval_predicate(red, centre));

  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(eval_predicate(p, bad), std::invalid_argument);
}

TEST_CASE("spec files") {
  const StlSpec spec = parse_spec(R"(
# reach-avoid
variables: x, y
predicates:
  g1 = x - 3
  g2 = 4 - x   # upper wall
formula:
  F[0,18](g1 &
          g2)
)");
  CHECK(spec.variables == std::vector<std::string>{"x", "y"});
  REQUIRE(spec.predicates.size() == 2);
  CHECK(spec.predicates[1].name == "g2");
  CHECK(spec.formula->kind == NodeKind::Eventually);

  CHECK_THROWS_AS(parse_spec("predicates:\n g1 = x +\nformula:\n g1\n"), SpecFileError);
  try {
    parse_spec("predicates:\n g1 = x\nformula:\n F[0,1](g9)\n");
    FAIL("expected throw");
  } catch (const SpecFileError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_spec("predicates:\n g1 = x - x\nformula:\n g1\n"), SpecFileError);
  CHECK_THROWS_AS(parse_spec("predicates:\n g1 = x\n"), SpecFileError);
}
