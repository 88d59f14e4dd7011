#include "stlta/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace stlta {

void validate_word(const TimedWord& w) {
  if (w.empty()) throw std::invalid_argument("timed word is empty");
  if (w.front().t != 0.0) throw std::invalid_argument("timed word must start at t = 0");
  std::size_t run = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i].t)) throw std::invalid_argument("timed word has a non-finite time");
    if (i > 0 && w[i].t < w[i - 1].t) throw std::invalid_argument("timed word times decrease");
    run = (i > 0 && w[i].t == w[i - 1].t) ? run + 1 : 1;
    if (run > 2) throw std::invalid_argument("more than two timed-word entries share one time");
  }
}

std::vector<double> Trajectory::state_on(std::size_t k, double t) const {
  const double t0 = times[k], t1 = times[k + 1];
  const double h = t1 - t0;
  const auto& x0 = states[k];
  const auto& x1 = states[k + 1];
  if (h <= 0.0) return x0;
  const double s = std::clamp((t - t0) / h, 0.0, 1.0);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  std::vector<double> x(x0.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = h00 * x0[i] + h10 * h * d_left[k][i] + h01 * x1[i] + h11 * h * d_right[k][i];
  }
  return x;
}

std::vector<double> Trajectory::state_at(double t) const {
  if (times.size() == 1) return states.front();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  k = std::min(k, segments() - 1);
  if (t == times[k]) return states[k];
  if (t == times[k + 1]) return states[k + 1];
  return state_on(k, t);
}

Verdict kleene_and(Verdict a, Verdict b) {
  if (a == Verdict::False || b == Verdict::False) return Verdict::False;
  if (a == Verdict::True && b == Verdict::True) return Verdict::True;
  return Verdict::Unknown;
}

Verdict kleene_or(Verdict a, Verdict b) {
  if (a == Verdict::True || b == Verdict::True) return Verdict::True;
  if (a == Verdict::False && b == Verdict::False) return Verdict::False;
  return Verdict::Unknown;
}

Verdict kleene_not(Verdict a) {
  if (a == Verdict::Unknown) return a;
  return a == Verdict::True ? Verdict::False : Verdict::True;
}

LabelSignal LabelSignal::from_word(const TimedWord& w) {
  validate_word(w);
  LabelSignal s;
  Label open = 0;
  for (std::size_t i = 0; i < w.size();) {
    const bool pair = i + 1 < w.size() && w[i + 1].t == w[i].t;
    s.add_breakpoint(w[i].t, w[i].sigma, open);
    open = pair ? w[i + 1].sigma : w[i].sigma;
    i += pair ? 2 : 1;
  }
  s.set_tail(open);
  return s;
}

void LabelSignal::add_breakpoint(double t, Label point, Label open_before) {
  if (bp_.empty()) {
    if (t != 0.0) throw std::invalid_argument("label signal must start at t = 0");
  } else {
    if (!(t > bp_.back())) throw std::invalid_argument("label signal breakpoints must increase");
    open_.push_back(open_before);
  }
  bp_.push_back(t);
  point_.push_back(point);
}

double LabelSignal::known_until() const {
  if (tail_) return kInfinity;
  return bp_.empty() ? -kInfinity : bp_.back();
}

std::vector<Piece> LabelSignal::pieces(const TimeInterval& range) const {
  std::vector<Piece> out;
  if (range.empty()) return out;
  if (bp_.empty()) {
    out.push_back({range, 0, false});
    return out;
  }
  auto add = [&](const TimeInterval& ext, Label l, bool known) {
    const TimeInterval c = intersection(ext, range);
    if (!c.empty()) out.push_back({c, l, known});
  };
  // First breakpoint not before range.lo, minus one for the stretch containing it.
  std::size_t i = static_cast<std::size_t>(std::lower_bound(bp_.begin(), bp_.end(), range.lo) - bp_.begin());
  if (i > 0) --i;
  const std::size_t m = bp_.size() - 1;
  for (; i <= m; ++i) {
    if (bp_[i] > range.hi) return out;
    add(TimeInterval::point(bp_[i]), point_[i], true);
    if (i < m) {
      add(TimeInterval::open(bp_[i], bp_[i + 1]), open_[i], true);
    } else {
      add(TimeInterval::unbounded_from(bp_[i], false), tail_.value_or(0), tail_.has_value());
    }
  }
  return out;
}

std::optional<Label> LabelSignal::label_at(double t) const {
  if (bp_.empty() || t < 0.0) return std::nullopt;
  auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - bp_.begin()) - 1;
  if (bp_[i] == t) return point_[i];
  if (i + 1 < bp_.size()) return open_[i];
  return tail_;
}

bool eval_propositional(const Stl& f, Label l) {
  switch (f->kind) {
    case NodeKind::True:
      return true;
    case NodeKind::Predicate:
      return (l >> f->pred) & 1u;
    case NodeKind::Not:
      return !eval_propositional(f->children[0], l);
    case NodeKind::And:
      return std::all_of(f->children.begin(), f->children.end(),
                         [&](const Stl& c) { return eval_propositional(c, l); });
    case NodeKind::Or:
      return std::any_of(f->children.begin(), f->children.end(),
                         [&](const Stl& c) { return eval_propositional(c, l); });
    default:
      throw std::logic_error("temporal operator inside a propositional formula");
  }
}

namespace {

Verdict piece_value(const Stl& f, const Piece& p) {
  return p.known ? to_verdict(eval_propositional(f, p.label)) : Verdict::Unknown;
}

Verdict eval_until(const LabelSignal& s, const Stl& lhs, const Stl& rhs, const TimeInterval& window,
                   const TimeInterval& scan) {
  Verdict prefix = Verdict::True;
  Verdict result = Verdict::False;
  for (const Piece& p : s.pieces(scan)) {
    const Verdict l = piece_value(lhs, p);
    if (p.extent.intersects(window)) {
      result = kleene_or(result, kleene_and(prefix, kleene_and(l, piece_value(rhs, p))));
      if (result == Verdict::True) return result;
    }
    prefix = kleene_and(prefix, l);
    if (prefix == Verdict::False) break;
  }
  return result;
}

}  // namespace

Verdict evaluate(const LabelSignal& s, const Stl& f, double t) {
  if (!has_temporal(f)) {
    const auto l = s.label_at(t);
    return l ? to_verdict(eval_propositional(f, *l)) : Verdict::Unknown;
  }
  switch (f->kind) {
    case NodeKind::Not:
      return kleene_not(evaluate(s, f->children[0], t));
    case NodeKind::And: {
      Verdict v = Verdict::True;
      for (const auto& c : f->children) {
        v = kleene_and(v, evaluate(s, c, t));
        if (v == Verdict::False) break;
      }
      return v;
    }
    case NodeKind::Or: {
      Verdict v = Verdict::False;
      for (const auto& c : f->children) {
        v = kleene_or(v, evaluate(s, c, t));
        if (v == Verdict::True) break;
      }
      return v;
    }
    case NodeKind::Eventually: {
      Verdict v = Verdict::False;
      for (const Piece& p : s.pieces(f->interval.shifted(t))) {
        v = kleene_or(v, piece_value(f->children[0], p));
        if (v == Verdict::True) break;
      }
      return v;
    }
    case NodeKind::Globally: {
      Verdict v = Verdict::True;
      for (const Piece& p : s.pieces(f->interval.shifted(t))) {
        v = kleene_and(v, piece_value(f->children[0], p));
        if (v == Verdict::False) break;
      }
      return v;
    }
    case NodeKind::Until: {
      const TimeInterval w = f->interval.shifted(t);
      const TimeInterval scan{t, w.hi, true, w.hi_closed};
      return eval_until(s, f->children[0], f->children[1], w, scan);
    }
    case NodeKind::SegmentUntil: {
      const TimeInterval w = f->interval.shifted(t);
      return eval_until(s, f->children[0], f->children[1], w, w);
    }
    default:
      throw std::logic_error("unreachable formula kind");
  }
}

void segment_events(const Trajectory& traj, std::size_t k, std::span<const PredicateFn> preds,
                    double last_bp, std::vector<LabelEvent>& out) {
  constexpr int kSub = 4;
  constexpr double kTol = 1e-9;
  const double t0 = traj.times[k], t1 = traj.times[k + 1];
  auto x_at = [&](double t) {
    if (t == t0) return traj.states[k];
    if (t == t1) return traj.states[k + 1];
    return traj.state_on(k, t);
  };
  std::vector<double> cuts;
  for (const auto& p : preds) {
    auto sign = [&](double t) { return eval_predicate(p, x_at(t)); };
    double prev_t = t0;
    bool prev_s = sign(t0);
    for (int j = 1; j <= kSub; ++j) {
      const double tj = j == kSub ? t1 : t0 + (t1 - t0) * j / kSub;
      const bool s = sign(tj);
      if (s != prev_s) {
        double lo = prev_t, hi = tj;
        while (hi - lo > kTol) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          (sign(mid) == prev_s ? lo : hi) = mid;
        }
        cuts.push_back(prev_s ? lo : hi);
      }
      prev_t = tj;
      prev_s = s;
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double prev = std::max(last_bp, t0);
  for (const double c : cuts) {
    if (c <= last_bp) continue;
    LabelEvent e;
    e.t = c;
    e.point = label_of(preds, x_at(c));
    e.open_before = label_of(preds, x_at(c > prev ? 0.5 * (prev + c) : t0));
    out.push_back(e);
    prev = c;
    last_bp = c;
  }
}

Label open_label(const Trajectory& traj, std::size_t k, double from, double to,
                 std::span<const PredicateFn> preds) {
  return label_of(preds, traj.state_on(k, 0.5 * (from + to)));
}

LabelSignal signal_of(const Trajectory& traj, std::span<const PredicateFn> preds) {
  LabelSignal s;
  if (traj.empty()) return s;
  s.add_breakpoint(traj.times.front(), label_of(preds, traj.states.front()), 0);
  double last = traj.times.front();
  std::vector<LabelEvent> events;
  for (std::size_t k = 0; k < traj.segments(); ++k) {
    events.clear();
    segment_events(traj, k, preds, last, events);
    for (const auto& e : events) {
      s.add_breakpoint(e.t, e.point, e.open_before);
      last = e.t;
    }
  }
  const double end = traj.end_time();
  if (end > last) {
    s.add_breakpoint(end, label_of(preds, traj.states.back()),
                     label_of(preds, traj.state_at(0.5 * (last + end))));
  }
  return s;
}

bool stl_satisfies(const Trajectory& traj, std::span<const PredicateFn> preds, const Stl& f, double t) {
  const Verdict v = evaluate(signal_of(traj, preds), f, t);
  if (v == Verdict::Unknown) {
    throw TrajectoryTooShort("trajectory ends at " + format_time(traj.end_time()) +
                             " before the verdict is determined (horizon " +
                             format_time(t + formula_horizon(f)) + ")");
  }
  return v == Verdict::True;
}

bool word_satisfies(const TimedWord& w, const Stl& f, double t) {
  return evaluate(LabelSignal::from_word(w), f, t) == Verdict::True;
}

}  // namespace stlta
