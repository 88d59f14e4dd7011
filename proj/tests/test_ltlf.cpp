#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "stlta/ltlf.hpp"

using namespace stlta;

namespace {

const std::vector<std::string> kNames{"g1", "g2", "g3"};

Ltl random_ltl(std::mt19937& rng, std::size_t natoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 13);
  const int k = pick(rng);
  auto sub = [&] { return random_ltl(rng, natoms, depth - 1); };
  switch (k) {
    case 0:
      return ltl_true();
    case 1:
    case 2:
      return ltl_atom(std::uniform_int_distribution<std::size_t>(0, natoms - 1)(rng));
    case 3:
      return ltl_not(sub());
    case 4:
      return ltl_and(sub(), sub());
    case 5:
      return ltl_or(sub(), sub());
    case 6:
      return ltl_next(sub());
    case 7:
      return ltl_weak_next(sub());
    case 8:
    case 9:
      return ltl_until(sub(), sub());
    case 10:
      return ltl_release(sub(), sub());
    case 11:
      return ltl_eventually(sub());
    case 12:
      return ltl_globally(sub());
    default:
      return ltl_false();
  }
}

// Every word over natoms predicates up to max_len letters.
template <class Fn>
void for_all_words(std::size_t natoms, std::size_t max_len, Fn fn) {
  const std::size_t letters = std::size_t{1} << natoms;
  std::vector<Label> w;
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= letters;
    w.assign(len, 0);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t i = 0; i < len; ++i) {
        w[i] = static_cast<Label>(c % letters);
        c /= letters;
      }
      fn(std::span<const Label>(w));
    }
  }
}

bool same_language(const Dfa& d, const Ltl& psi, std::size_t natoms, std::size_t max_len) {
  bool ok = true;
  for_all_words(natoms, max_len, [&](std::span<const Label> w) {
    if (ok && d.accepts(w) != ltlf_eval(w, psi)) ok = false;
  });
  return ok;
}

std::vector<Ltl> corpus() {
  const Ltl a = ltl_atom(0), b = ltl_atom(1), c = ltl_atom(2);
  return {
      ltl_true(),
      ltl_false(),
      a,
      ltl_not(a),
      ltl_and(a, b),
      ltl_or(a, ltl_not(b)),
      ltl_next(a),
      ltl_weak_next(a),
      ltl_next(ltl_next(b)),
      ltl_weak_next(ltl_weak_next(ltl_false())),
      ltl_until(a, b),
      ltl_until(ltl_true(), b),
      ltl_until(a, ltl_and(a, b)),
      ltl_release(a, b),
      ltl_release(ltl_false(), b),
      ltl_eventually(a),
      ltl_globally(a),
      ltl_globally(ltl_not(b)),
      ltl_eventually(ltl_globally(a)),
      ltl_globally(ltl_eventually(a)),
      ltl_globally(ltl_or(ltl_not(a), ltl_eventually(b))),
      ltl_globally(ltl_or(ltl_not(a), ltl_next(b))),
      ltl_globally(ltl_or(ltl_not(a), ltl_weak_next(b))),
      ltl_and(ltl_eventually(a), ltl_eventually(b)),
      ltl_and(ltl_eventually(a), ltl_globally(ltl_not(b))),
      ltl_or(ltl_globally(a), ltl_globally(b)),
      ltl_until(a, ltl_until(b, c)),
      ltl_until(ltl_until(a, b), c),
      ltl_release(a, ltl_until(b, c)),
      ltl_not(ltl_until(a, b)),
      ltl_not(ltl_release(a, b)),
      ltl_not(ltl_next(a)),
      ltl_not(ltl_weak_next(a)),
      ltl_not(ltl_eventually(ltl_globally(a))),
      ltl_and(ltl_globally(ltl_not(c)), ltl_eventually(ltl_and(a, b))),
      ltl_and(ltl_until(a, b), ltl_until(b, a)),
      ltl_or(ltl_next(a), ltl_next(ltl_not(a))),
      ltl_eventually(ltl_and(a, ltl_next(ltl_and(b, ltl_next(c))))),
      ltl_globally(ltl_and(a, ltl_not(a))),
      ltl_eventually(ltl_or(a, ltl_not(a))),
      ltl_until(ltl_not(a), ltl_and(b, ltl_not(c))),
      ltl_release(ltl_and(a, b), ltl_or(b, c)),
      ltl_globally(ltl_until(a, b)),
      ltl_eventually(ltl_release(a, b)),
      ltl_and(ltl_globally(a), ltl_eventually(ltl_not(a))),
      ltl_or(ltl_and(a, ltl_next(b)), ltl_and(ltl_not(a), ltl_weak_next(c))),
      ltl_until(a, ltl_globally(b)),
      ltl_release(a, ltl_eventually(b)),
      ltl_next(ltl_globally(c)),
      ltl_weak_next(ltl_eventually(c)),
  };
}

}  // namespace

TEST_CASE("G !g2 is a single accepting state looping on !g2") {
  const Dfa d = ltlf_to_dfa(ltl_globally(ltl_not(ltl_atom(1))));
  REQUIRE(d.size() == 1);
  CHECK(d.accepting[d.initial]);
  CHECK(d.guard(d.initial, d.initial).to_string(kNames) == "!g2");
  CHECK(d.step(d.initial, 0b10) == kNoState);
}

TEST_CASE("F g1 has a waiting state and an absorbing accepting state") {
  const Dfa d = ltlf_to_dfa(ltl_eventually(ltl_atom(0)));
  REQUIRE(d.size() == 2);
  const std::size_t q1 = d.initial;
  const std::size_t q2 = 1 - q1;
  CHECK_FALSE(d.accepting[q1]);
  CHECK(d.accepting[q2]);
  CHECK(d.guard(q1, q1).to_string(kNames) == "!g1");
  CHECK(d.guard(q1, q2).to_string(kNames) == "g1");
  CHECK(d.guard(q2, q2).is_true());
  CHECK(d.guard(q2, q1).is_false());
}

TEST_CASE("true is one accepting state with a true loop") {
  const Dfa d = ltlf_to_dfa(ltl_true());
  REQUIRE(d.size() == 1);
  CHECK(d.accepting[0]);
  CHECK(d.guard(0, 0).is_true());
}

TEST_CASE("false has no accepting state") {
  const Dfa d = ltlf_to_dfa(ltl_false());
  CHECK(d.size() == 1);
  CHECK_FALSE(d.accepting[d.initial]);
}

TEST_CASE("empty-word convention") {
  const std::vector<Label> eps;
  CHECK(ltlf_eval(eps, ltl_globally(ltl_atom(0))));
  CHECK_FALSE(ltlf_eval(eps, ltl_eventually(ltl_atom(0))));
  CHECK_FALSE(ltlf_eval(eps, ltl_atom(0)));
  CHECK(ltlf_eval(eps, ltl_not(ltl_atom(0))));
  CHECK(ltlf_eval(eps, ltl_weak_next(ltl_false())));
  CHECK_FALSE(ltlf_eval(eps, ltl_next(ltl_true())));
}

TEST_CASE("ltlf_eval basics") {
  const Ltl g = ltl_globally(ltl_not(ltl_atom(1)));
  CHECK(ltlf_eval(std::vector<Label>{0, 0}, g));
  CHECK_FALSE(ltlf_eval(std::vector<Label>{0b10, 0}, g));
  CHECK(ltlf_eval(std::vector<Label>{0, 0b01}, ltl_eventually(ltl_atom(0))));
  // Last position: strong next fails, weak next holds.
  CHECK_FALSE(ltlf_eval(std::vector<Label>{1}, ltl_next(ltl_true())));
  CHECK(ltlf_eval(std::vector<Label>{1}, ltl_weak_next(ltl_false())));
}

TEST_CASE("DFA language equals direct evaluation on a fixed corpus") {
  for (const Ltl& psi : corpus()) {
    const Dfa d = ltlf_to_dfa(psi);
    INFO(to_string(psi, kNames));
    CHECK(same_language(d, psi, 3, 5));
  }
}

TEST_CASE("two predicates, every word up to length 6") {
  for (const Ltl& psi : corpus()) {
    if (atoms_of(psi).size() == 3) continue;
    INFO(to_string(psi, kNames));
    CHECK(same_language(ltlf_to_dfa(psi), psi, 2, 6));
  }
}

TEST_CASE("random formulas of depth 4") {
  std::mt19937 rng(7);
  for (int i = 0; i < 120; ++i) {
    const Ltl psi = random_ltl(rng, 3, 4);
    INFO(to_string(psi, kNames));
    CHECK(same_language(ltlf_to_dfa(psi), psi, 3, 4));
  }
}

TEST_CASE("output is already minimal") {
  std::mt19937 rng(11);
  auto all = corpus();
  for (int i = 0; i < 60; ++i) all.push_back(random_ltl(rng, 3, 4));
  for (const Ltl& psi : all) {
    const Dfa d = ltlf_to_dfa(psi);
    INFO(to_string(psi, kNames));
    CHECK(isomorphic(d, minimize(d)));
  }
}

TEST_CASE("negation complements the language") {
  std::mt19937 rng(3);
  auto all = corpus();
  for (int i = 0; i < 40; ++i) all.push_back(random_ltl(rng, 3, 3));
  for (const Ltl& psi : all) {
    const Dfa pos = ltlf_to_dfa(psi);
    const Dfa neg = ltlf_to_dfa(ltl_not(psi));
    bool ok = true;
    for_all_words(3, 4, [&](std::span<const Label> w) {
      if (ok && pos.accepts(w) == neg.accepts(w)) ok = false;
    });
    INFO(to_string(psi, kNames));
    CHECK(ok);
  }
}

TEST_CASE("equivalent formulas give isomorphic automata") {
  const Ltl a = ltl_atom(0), b = ltl_atom(1);
  CHECK(isomorphic(ltlf_to_dfa(ltl_eventually(a)), ltlf_to_dfa(ltl_until(ltl_true(), a))));
  CHECK(isomorphic(ltlf_to_dfa(ltl_globally(a)), ltlf_to_dfa(ltl_not(ltl_eventually(ltl_not(a))))));
  CHECK(isomorphic(ltlf_to_dfa(ltl_release(a, b)), ltlf_to_dfa(ltl_not(ltl_until(ltl_not(a), ltl_not(b))))));
  CHECK_FALSE(isomorphic(ltlf_to_dfa(ltl_eventually(a)), ltlf_to_dfa(ltl_globally(a))));
}

TEST_CASE("guards print as sums of products") {
  Guard g{{0, 1}, {false, true, true, true}};
  CHECK(g.to_string(kNames) == "g1 | g2");
  Guard h{{0, 1}, {false, false, false, true}};
  CHECK(h.to_string(kNames) == "g1 & g2");
  CHECK(Guard::always({0}).to_string(kNames) == "true");
  CHECK(h(0b11));
  CHECK_FALSE(h(0b01));
}

TEST_CASE("strip_time erases aligned windows") {
  const std::vector<std::string> names{"g1", "g2"};
  const Stl g = mk_globally(TimeInterval::closed(0, 6), mk_not(mk_pred(1)));
  CHECK(to_string(strip_time(g, TimeInterval::closed(0, 6)), names) == "G !g2");
  const TimeInterval i{6, 18, false, true};
  CHECK(to_string(strip_time(mk_eventually(i, mk_pred(0)), i), names) == "F g1");
  const Ltl atom = strip_time(mk_pred(0), TimeInterval::point(0));
  CHECK(atom->kind == LtlKind::Atom);
  CHECK(atom->atom == 0);
  CHECK_THROWS_AS(strip_time(g, i), NotAlignedError);
  const Stl s = mk_segment_until(i, mk_pred(0), mk_pred(1));
  const Ltl su = strip_time(s, i);
  CHECK(su->kind == LtlKind::Until);
}
