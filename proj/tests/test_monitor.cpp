#include <catch_amalgamated.hpp>

#include <cmath>

#include "stlta/monitor.hpp"
#include "test_util.hpp"

using namespace stlta;

namespace {

const std::vector<std::string> kVars{"x", "y"};

Trajectory constant_trajectory(std::vector<double> x, double end, double dt = 0.5) {
  Trajectory tr;
  const std::vector<double> zero(x.size(), 0.0);
  for (double t = 0.0; t <= end + 1e-12; t += dt) {
    tr.times.push_back(t);
    tr.states.push_back(x);
    if (tr.times.size() > 1) {
      tr.controls.push_back({});
      tr.d_left.push_back(zero);
      tr.d_right.push_back(zero);
    }
  }
  return tr;
}

// x = t, y = sin t sampled every 0.01 s with exact derivatives.
Trajectory sine_trajectory(double end) {
  Trajectory tr;
  const int n = static_cast<int>(std::round(end / 0.01));
  for (int k = 0; k <= n; ++k) {
    const double t = k * 0.01;
    tr.times.push_back(t);
    tr.states.push_back({t, std::sin(t)});
    if (k > 0) {
      const double tp = (k - 1) * 0.01;
      tr.controls.push_back({});
      tr.d_left.push_back({1.0, std::cos(tp)});
      tr.d_right.push_back({1.0, std::cos(t)});
    }
  }
  return tr;
}

}  // namespace

TEST_CASE("constant trajectory inside the goal satisfies eventually") {
  std::vector<PredicateFn> preds{{"g1", Polynomial::parse("x - 3", kVars)}};
  const auto tr = constant_trajectory({3.5, 2.5}, 20);
  const std::vector<std::string> names{"g1"};
  CHECK(stl_satisfies(tr, preds, parse_stl("F[0,18](g1)", names)));
}

TEST_CASE("constant trajectory violating the predicate fails globally") {
  std::vector<PredicateFn> preds{{"g", Polynomial::parse("x - 3", kVars)}};
  const auto tr = constant_trajectory({1.0, 0.0}, 10);
  const std::vector<std::string> names{"g"};
  CHECK_FALSE(stl_satisfies(tr, preds, parse_stl("G[0,6](g)", names)));
}

TEST_CASE("short trajectories raise only when the verdict is open") {
  std::vector<PredicateFn> preds{{"g", Polynomial::parse("x - 3", kVars)}};
  const std::vector<std::string> names{"g"};
  const auto outside = constant_trajectory({1.0, 0.0}, 5);
  CHECK_THROWS_AS(stl_satisfies(outside, preds, parse_stl("F[0,10](g)", names)), TrajectoryTooShort);
  const auto inside = constant_trajectory({4.0, 0.0}, 5);
  CHECK(stl_satisfies(inside, preds, parse_stl("F[0,10](g)", names)));
  CHECK(evaluate(signal_of(inside, preds), parse_stl("G[0,10](g)", names), 0) == Verdict::Unknown);
  CHECK(evaluate(LabelSignal{}, parse_stl("F[0,1](g)", names), 0) == Verdict::Unknown);
}

TEST_CASE("word validation") {
  CHECK_THROWS_AS(validate_word({}), std::invalid_argument);
  CHECK_THROWS_AS(validate_word({{1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_word({{1, 0.0}, {0, 2.0}, {0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_word({{1, 0.0}, {0, 2.0}, {0, 2.0}, {1, 2.0}}), std::invalid_argument);
  CHECK_NOTHROW(validate_word({{1, 0.0}, {0, 2.0}, {1, 2.0}}));
}

TEST_CASE("paired entries separate the point from the following stretch") {
  const std::vector<std::string> names{"a"};
  // a holds only at the single instant 6.
  const TimedWord w{{0, 0.0}, {1, 6.0}, {0, 6.0}};
  CHECK(word_satisfies(w, parse_stl("F[6,6](a)", names)));
  CHECK_FALSE(word_satisfies(w, parse_stl("F(6,18](a)", names)));
  CHECK_FALSE(word_satisfies(w, parse_stl("F[0,6)(a)", names)));
  CHECK(word_satisfies(w, parse_stl("G(6,20](!a)", names)));
}

TEST_CASE("until requires the left operand from the evaluation time") {
  const std::vector<std::string> names{"a", "b"};
  // a on [0,3), b from 3 on.
  const TimedWord w{{1, 0.0}, {2, 3.0}};
  CHECK_FALSE(word_satisfies(w, parse_stl("a U[2,5] b", names)));  // a fails at 3
  const TimedWord w2{{1, 0.0}, {3, 3.0}};
  CHECK(word_satisfies(w2, parse_stl("a U[2,5] b", names)));
  CHECK(word_satisfies(w2, parse_stl("a U[4,5] b", names)));
  // segment-local until ignores what happens before the window
  const TimedWord w3{{0, 0.0}, {1, 2.0}, {3, 3.0}};
  CHECK_FALSE(word_satisfies(w3, parse_stl("a U[2,5] b", names)));
  CHECK(word_satisfies(w3, parse_stl("a S[2,5] b", names)));
}

TEST_CASE("negation flips the verdict on random words") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Stl f = testutil::random_stl(rng, 3, 20);
    const TimedWord w = testutil::random_word(rng, 3, 6, 20);
    CHECK(word_satisfies(w, mk_not(f)) == !word_satisfies(w, f));
  }
}

TEST_CASE("derived operators agree with their expansions") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const TimeInterval iv = testutil::random_interval(rng, 20);
    const Stl phi = testutil::random_prop(rng, 3, 2);
    const TimedWord w = testutil::random_word(rng, 3, 6, 20);
    CHECK(word_satisfies(w, mk_eventually(iv, phi)) == word_satisfies(w, mk_until(iv, mk_true(), phi)));
    CHECK(word_satisfies(w, mk_globally(iv, phi)) ==
          word_satisfies(w, mk_not(mk_eventually(iv, mk_not(phi)))));
  }
}

TEST_CASE("word evaluation matches a grid-sampling oracle") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3000; ++i) {
    const Stl f = testutil::random_stl(rng, 3, 20);
    const TimedWord w = testutil::random_word(rng, 3, 6, 20);
    const LabelSignal s = LabelSignal::from_word(w);
    auto label = [&](double t) { return *s.label_at(t); };
    const double t0 = std::uniform_int_distribution<int>(0, 3)(rng);
    INFO(to_string(f, std::vector<std::string>{"a", "b", "c"}) << " at " << t0);
    CHECK(word_satisfies(w, f, t0) == testutil::dense_eval(label, f, t0, 0.5));
  }
}

TEST_CASE("trajectory evaluation matches dense sampling") {
  const auto tr = sine_trajectory(30.0);
  std::vector<PredicateFn> preds{{"p", Polynomial::parse("x - 3.3", kVars)},
                                 {"q", Polynomial::parse("y - 0.2", kVars)},
                                 {"r", Polynomial::parse("0.9 - y", kVars)}};
  const LabelSignal s = signal_of(tr, preds);
  // crossings of y = 0.2 near asin(0.2) and pi - asin(0.2)
  bool found = false;
  for (double b : s.breakpoints()) found |= std::abs(b - (M_PI - std::asin(0.2))) < 1e-6;
  CHECK(found);
  auto exact = [&](double t) {
    const std::vector<double> x{t, std::sin(t)};
    return label_of(preds, x);
  };
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    const Stl f = testutil::random_stl(rng, 3, 10);
    INFO(to_string(f, std::vector<std::string>{"p", "q", "r"}));
    CHECK(stl_satisfies(tr, preds, f) == testutil::dense_eval(exact, f, 0.0, 1e-3));
  }
}

TEST_CASE("hermite dense output is accurate") {
  const auto tr = sine_trajectory(10.0);
  for (double t = 0.003; t < 10.0; t += 0.137) {
    const auto x = tr.state_at(t);
    CHECK(std::abs(x[1] - std::sin(t)) < 1e-8);
  }
}
