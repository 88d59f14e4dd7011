#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "stlta/product.hpp"
#include "test_util.hpp"

using namespace stlta;

namespace {

Guard on_g(bool value) { return Guard{{0}, {!value, value}}; }

// a --!g--> a, a --g--> b, b --true--> b; both live on [0,10].
TimedNfa two_state() {
  TimedNfa t;
  t.states = {{TimeInterval::closed(0, 10), false, 0, 0, "a"}, {TimeInterval::closed(0, 10), true, 0, 1, "b"}};
  t.initial = {0};
  t.edges = {{0, 0, on_g(false)}, {0, 1, on_g(true)}, {1, 1, Guard::always({})}};
  return t;
}

// Start 0, short route 0-1-5, long route 0-2-3-5; region 5 is the goal
// (label g) and region 4 is isolated.
AbstractionGraph two_routes(double vol = 1.0) {
  AbstractionGraph g;
  g.regions.resize(6);
  for (std::size_t i = 0; i < 6; ++i) {
    g.regions[i].id = i;
    g.regions[i].volume = vol;
  }
  g.regions[5].label = 1;
  g.adjacency = {{1, 2}, {0, 5}, {0, 3}, {2, 5}, {}, {1, 3}};
  return g;
}

// Regions visited before the automaton accepts.
std::vector<std::size_t> regions_of(const Lead& l) {
  std::vector<std::size_t> out;
  for (const auto& z : l.states) {
    if (z.q == 1) break;
    if (out.empty() || out.back() != z.d) out.push_back(z.d);
  }
  return out;
}

TimedNfa fig3c() {
  const Dfa a = ltlf_to_dfa(ltl_globally(ltl_not(ltl_atom(1))));
  const Dfa b = ltlf_to_dfa(ltl_eventually(ltl_atom(0)));
  return connect_branch(to_timed_dfa(a, TimeInterval::closed(0, 6)),
                        to_timed_dfa(b, TimeInterval{6, 18, false, true}));
}

}  // namespace

TEST_CASE("state weight formula") {
  CHECK(state_weight(0, 0, 1, 6, 2) == Catch::Approx(3.0));
  CHECK(state_weight(0, 1, 1, 6, 2) == Catch::Approx(3.0 / 4));
  CHECK(std::isfinite(state_weight(0, 0, 1, 6, 1)));
  CHECK(state_weight(4, 0, 1, 6, 2) == Catch::Approx(15.0));
  // Repeated selection drives the weight down monotonically.
  double prev = state_weight(3, 0, 2, 5, 3);
  for (int n = 1; n < 50; ++n) {
    const double w = state_weight(3, n, 2, 5, 3);
    CHECK(w < prev);
    CHECK(w > 0.0);
    prev = w;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("distance to acceptance on the reach-avoid automaton") {
  const TimedNfa t = fig3c();
  const auto dist = dist_from_acc(t);
  const std::size_t q1 = t.initial[0];
  for (std::size_t q = 0; q < t.size(); ++q) {
    if (t.states[q].accepting) {
      CHECK(dist[q] == 1);
    } else {
      CHECK(dist[q] == 2);  // both q1 and q2 have a g1 edge to q3
    }
  }
  CHECK(dist[q1] == 2);
}

TEST_CASE("states that cannot accept get no weight") {
  TimedNfa t = two_state();
  t.states.push_back({TimeInterval::closed(0, 10), false, 0, 2, "dead"});
  t.edges.push_back({0, 2, Guard::always({})});
  t.edges.push_back({2, 2, Guard::always({})});
  CHECK(dist_from_acc(t)[2] == kUnreachable);
  const AbstractionGraph g = two_routes();
  const ProductAutomaton p(t, g, 20);
  CHECK(p.weight({2, 0}) == 0.0);
  CHECK(p.weight({0, 0}) > 0.0);
}

TEST_CASE("durations come from invariants") {
  TimedNfa t = two_state();
  t.states[0].inv = TimeInterval::point(6);
  t.states[1].inv = TimeInterval::unbounded_from(6, false);
  const ProductAutomaton p(t, two_routes(), 20);
  CHECK(p.duration(0) == Catch::Approx(0.1));
  CHECK(p.duration(1) == Catch::Approx(14.0));
}

TEST_CASE("the shorter of two equal-weight routes is the lead") {
  const TimedNfa t = two_state();
  const AbstractionGraph g = two_routes();
  const ProductAutomaton p(t, g, 20);
  const auto lead = p.compute_lead({{0, 0}});
  REQUIRE(lead);
  CHECK(regions_of(*lead) == std::vector<std::size_t>{0, 1, 5});
  CHECK(p.accepting(lead->states.back()));
  // Entering (a,0) costs 1/5^2, then 0->1->5 in state a (weight 5 each) and
  // into b (weight 10).
  CHECK(lead->cost == Catch::Approx(1.0 / 25 + 2.0 / 25 + 1.0 / 50));
}

TEST_CASE("selecting the short route enough times flips the lead") {
  // Short: 2 (n+1)^2 / 25 + 1/50 against long: 3/25 + 1/50, so a single
  // selection of (a,1) is enough.
  const TimedNfa t = two_state();
  const AbstractionGraph g = two_routes();
  ProductAutomaton p(t, g, 20);
  p.selected({0, 1});
  const auto lead = p.compute_lead({{0, 0}});
  REQUIRE(lead);
  CHECK(regions_of(*lead) == std::vector<std::size_t>{0, 2, 3, 5});
  CHECK(lead->cost == Catch::Approx(1.0 / 25 + 3.0 / 25 + 1.0 / 50));
  CHECK(p.numsel({0, 1}) == 1);
  CHECK(p.weight({0, 1}) == Catch::Approx(5.0 / 4));
}

TEST_CASE("coverage raises the weight") {
  ProductAutomaton p(two_state(), two_routes(), 20);
  const double before = p.weight({0, 3});
  p.vertex_added({0, 3});
  CHECK(p.cov({0, 3}) == 1);
  CHECK(p.weight({0, 3}) == Catch::Approx(2 * before));
}

TEST_CASE("a worn-out source gives way to an earlier one") {
  const TimedNfa t = two_state();
  const AbstractionGraph g = two_routes();
  ProductAutomaton p(t, g, 20);
  // From (a,1) the goal is one step closer, so it wins while fresh.
  auto lead = p.compute_lead({{0, 0}, {0, 1}});
  REQUIRE(lead);
  CHECK(lead->states.front() == ProductState{0, 1});
  for (int i = 0; i < 3; ++i) p.selected({0, 1});
  lead = p.compute_lead({{0, 0}, {0, 1}});
  REQUIRE(lead);
  CHECK(lead->states.front() == ProductState{0, 0});
}

TEST_CASE("no lead when acceptance is unreachable") {
  TimedNfa t = two_state();
  AbstractionGraph g = two_routes();
  g.adjacency = {{1}, {0}, {3}, {2}, {}, {}};  // goal cut off
  const ProductAutomaton p(t, g, 20);
  CHECK_FALSE(p.compute_lead({{0, 0}}));
  CHECK(p.compute_lead({{0, 5}}));
  CHECK(p.compute_lead({{1, 0}})->states.size() == 1);
}

namespace {

struct RaSetup {
  TimedNfa ta;
  AbstractionGraph g;
};

RaSetup ra_setup() {
  const std::vector<std::string> vars{"x", "y"};
  std::vector<PredicateFn> preds{{"g1", Polynomial::parse("1 - (x - 3.5)^2 - (y - 2.5)^2", vars)},
                                 {"g2", Polynomial::parse("2 - x", vars)}};
  const std::vector<double> lo{0, 0}, hi{5, 5};
  return {fig3c(), decompose(lo, hi, preds)};
}

}  // namespace

TEST_CASE("product moves follow the source label and the region graph") {
  const auto s = ra_setup();
  const ProductAutomaton p(s.ta, s.g, 20);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
  for (int i = 0; i < 300; ++i) {
    const std::size_t zi = pick(rng);
    const ProductState z = p.state(zi);
    std::set<std::size_t> expected;
    for (const TimedEdge& e : s.ta.edges) {
      if (e.from != z.q || !e.guard(s.g.regions[z.d].label)) continue;
      expected.insert(p.id({e.to, z.d}));
      for (std::size_t d2 : s.g.adjacency[z.d]) expected.insert(p.id({e.to, d2}));
    }
    const auto& got = p.successors(zi);
    CHECK(std::set<std::size_t>(got.begin(), got.end()) == expected);
  }
}

TEST_CASE("leads are connected accepting paths and ignore volume scale") {
  auto s = ra_setup();
  ProductAutomaton p(s.ta, s.g, 20);
  auto scaled_g = s.g;
  for (auto& r : scaled_g.regions) r.volume *= 3.0;
  ProductAutomaton scaled(s.ta, scaled_g, 20);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
  for (int round = 0; round < 30; ++round) {
    for (int k = 0; k < 20; ++k) {
      const ProductState z = p.state(pick(rng));
      if (rng() % 2) {
        p.selected(z);
        scaled.selected(z);
      } else {
        p.vertex_added(z);
        scaled.vertex_added(z);
      }
    }
    const std::vector<double> x0{4.5, 0.5};
    const auto src = p.initial(x0);
    REQUIRE_FALSE(src.empty());
    const auto lead = p.compute_lead(src);
    REQUIRE(lead);
    CHECK(p.accepting(lead->states.back()));
    for (std::size_t i = 1; i < lead->states.size(); ++i) {
      const auto& succ = p.successors(p.id(lead->states[i - 1]));
      CHECK(std::binary_search(succ.begin(), succ.end(), p.id(lead->states[i])));
    }
    for (const auto& z : lead->states) CHECK(p.weight(z) > 0.0);
    const auto other = scaled.compute_lead(src);
    REQUIRE(other);
    CHECK(other->states == lead->states);
  }
}

TEST_CASE("initial states read the label of x0") {
  const auto s = ra_setup();
  const ProductAutomaton p(s.ta, s.g, 20);
  const std::vector<double> safe{0.5, 0.5};  // g2 holds: G !g2 already violated
  CHECK(p.initial(safe).empty());
  const std::vector<double> ok{4.5, 0.5};
  const auto z0 = p.initial(ok);
  REQUIRE(z0.size() == 1);
  CHECK(z0[0].d == s.g.region_of(ok));
}
