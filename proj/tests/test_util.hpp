#pragma once

// Shared generators for randomized tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "stlta/formula.hpp"
#include "stlta/monitor.hpp"

namespace testutil {

using namespace stlta;

inline Stl random_prop(std::mt19937_64& rng, std::size_t npred, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  switch (pick(rng)) {
    case 0:
      if (std::uniform_int_distribution<int>(0, 7)(rng) == 0) return mk_true();
      [[fallthrough]];
    case 1:
      return mk_pred(std::uniform_int_distribution<std::size_t>(0, npred - 1)(rng));
    case 2:
      return mk_not(random_prop(rng, npred, depth - 1));
    case 3:
    case 4:
      return mk_and(random_prop(rng, npred, depth - 1), random_prop(rng, npred, depth - 1));
    default:
      return mk_or(random_prop(rng, npred, depth - 1), random_prop(rng, npred, depth - 1));
  }
}

/// Interval with endpoints on a grid of `step` inside [0, horizon].
inline TimeInterval random_interval(std::mt19937_64& rng, double horizon, double step = 1.0) {
  const int n = static_cast<int>(horizon / step);
  std::uniform_int_distribution<int> pt(0, n);
  std::bernoulli_distribution coin(0.5);
  int a = pt(rng), b = pt(rng);
  if (a > b) std::swap(a, b);
  TimeInterval i{a * step, b * step, true, true};
  if (a == b) return i;
  i.lo_closed = coin(rng);
  i.hi_closed = coin(rng);
  return i;
}

inline Stl random_temporal(std::mt19937_64& rng, std::size_t npred, double horizon) {
  const TimeInterval i = random_interval(rng, horizon);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return mk_eventually(i, random_prop(rng, npred, 2));
    case 1:
      return mk_globally(i, random_prop(rng, npred, 2));
    default:
      return mk_until(i, random_prop(rng, npred, 1), random_prop(rng, npred, 1));
  }
}

/// Random STL_nn formula: a Boolean combination of temporal operators and
/// propositions.
inline Stl random_stl(std::mt19937_64& rng, std::size_t npred, double horizon, int depth = 2) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 2);
  switch (pick(rng)) {
    case 0:
      return random_prop(rng, npred, 1);
    case 1:
    case 2:
      return random_temporal(rng, npred, horizon);
    case 3:
      return mk_not(random_stl(rng, npred, horizon, depth - 1));
    case 4:
    case 5:
      return mk_and(random_stl(rng, npred, horizon, depth - 1), random_stl(rng, npred, horizon, depth - 1));
    default:
      return mk_or(random_stl(rng, npred, horizon, depth - 1), random_stl(rng, npred, horizon, depth - 1));
  }
}

/// Random valid timed word with up to `max_len` entries; times are drawn from
/// a grid so that they often coincide with interval endpoints.
inline TimedWord random_word(std::mt19937_64& rng, std::size_t npred, std::size_t max_len, double horizon,
                             double step = 1.0) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<Label> sym(0, (Label{1} << npred) - 1);
  const int n = static_cast<int>(horizon / step);
  std::uniform_int_distribution<int> pt(0, n);
  const std::size_t l = len(rng);
  std::vector<double> times{0.0};
  while (times.size() < l) times.push_back(pt(rng) * step);
  std::sort(times.begin(), times.end());
  TimedWord w;
  for (double t : times) {
    const std::size_t k = w.size();
    if (k >= 2 && w[k - 1].t == t && w[k - 2].t == t) continue;
    w.push_back({sym(rng), t});
  }
  return w;
}

/// Sampling evaluation of f at t for a label function, used as an
/// independent oracle on continuous trajectories.
inline bool dense_eval(const std::function<Label(double)>& label, const Stl& f, double t, double step) {
  // Grid points k*step inside j plus its closed endpoints.  For words whose
  // times and interval endpoints lie on a grid of 2*step this is exact.
  auto samples = [&](const TimeInterval& j) {
    std::vector<double> ts;
    if (j.lo_closed) ts.push_back(j.lo);
    const long k0 = static_cast<long>(std::ceil(j.lo / step));
    const long k1 = static_cast<long>(std::floor(j.hi / step));
    for (long k = k0; k <= k1; ++k) {
      const double s = k * step;
      if (j.contains(s) && (ts.empty() || s > ts.back())) ts.push_back(s);
    }
    if (j.hi_closed && (ts.empty() || ts.back() != j.hi)) ts.push_back(j.hi);
    return ts;
  };
  switch (f->kind) {
    case NodeKind::Not:
      return !dense_eval(label, f->children[0], t, step);
    case NodeKind::And:
      for (const auto& c : f->children) {
        if (!dense_eval(label, c, t, step)) return false;
      }
      return true;
    case NodeKind::Or:
      for (const auto& c : f->children) {
        if (dense_eval(label, c, t, step)) return true;
      }
      return false;
    case NodeKind::Eventually:
      for (double s : samples(f->interval.shifted(t))) {
        if (eval_propositional(f->children[0], label(s))) return true;
      }
      return false;
    case NodeKind::Globally:
      for (double s : samples(f->interval.shifted(t))) {
        if (!eval_propositional(f->children[0], label(s))) return false;
      }
      return true;
    case NodeKind::Until: {
      const TimeInterval j = f->interval.shifted(t);
      for (double s : samples(TimeInterval{t, j.hi, true, j.hi_closed})) {
        const Label l = label(s);
        if (!eval_propositional(f->children[0], l)) return false;
        if (j.contains(s) && eval_propositional(f->children[1], l)) return true;
      }
      return false;
    }
    default:
      return eval_propositional(f, label(t));
  }
}

}  // namespace testutil
