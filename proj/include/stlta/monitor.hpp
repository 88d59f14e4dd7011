#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stlta/formula.hpp"

namespace stlta {

/// One letter of a timed word.
struct TimedLetter {
  Label sigma = 0;
  double t = 0.0;

  friend bool operator==(const TimedLetter&, const TimedLetter&) = default;
};

/// Non-decreasing (sigma, t) entries starting at t = 0.  A single entry at
/// time t gives the label at t and on the open stretch up to the next entry;
/// a second entry with the same time overrides the open stretch.  The last
/// label persists forever.
using TimedWord = std::vector<TimedLetter>;

/// Throws std::invalid_argument when the word violates the conventions above.
void validate_word(const TimedWord& w);

/// Sampled state trajectory with a cubic Hermite interpolant on each segment.
/// Segment k spans [times[k], times[k+1]] under controls[k]; d_left/d_right
/// hold the vector field at its two ends.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> controls;
  std::vector<std::vector<double>> d_left;
  std::vector<std::vector<double>> d_right;

  bool empty() const { return times.empty(); }
  double end_time() const { return times.empty() ? 0.0 : times.back(); }
  std::size_t segments() const { return times.empty() ? 0 : times.size() - 1; }

  /// Dense output on segment k at time t.
  std::vector<double> state_on(std::size_t k, double t) const;
  /// Dense output at any t in [0, end_time()].
  std::vector<double> state_at(double t) const;
};

enum class Verdict { False, True, Unknown };

Verdict kleene_and(Verdict a, Verdict b);
Verdict kleene_or(Verdict a, Verdict b);
Verdict kleene_not(Verdict a);
inline Verdict to_verdict(bool b) { return b ? Verdict::True : Verdict::False; }

/// A stretch of constant label: a single point or an open interval.
struct Piece {
  TimeInterval extent;
  Label label = 0;
  bool known = true;
};

/// Piecewise-constant label signal.  Breakpoints b_0 = 0 < b_1 < ... < b_m
/// carry their own point label, and each open stretch between them has one
/// label.  After b_m the signal either continues with `tail` or is unknown.
class LabelSignal {
 public:
  LabelSignal() = default;

  static LabelSignal from_word(const TimedWord& w);

  /// Appends a breakpoint at t > last breakpoint; `open_before` labels the
  /// stretch from the previous breakpoint.  The first call must use t = 0 and
  /// ignores open_before.
  void add_breakpoint(double t, Label point, Label open_before);
  void set_tail(std::optional<Label> tail) { tail_ = tail; }

  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<Label>& point_labels() const { return point_; }
  const std::vector<Label>& open_labels() const { return open_; }
  const std::optional<Label>& tail() const { return tail_; }

  /// Time up to which the label is known (inf with a tail).
  double known_until() const;

  /// Pieces covering `range`, clipped to it, in time order.
  std::vector<Piece> pieces(const TimeInterval& range) const;

  /// Label at time t, or nullopt if unknown.
  std::optional<Label> label_at(double t) const;

 private:
  std::vector<double> bp_;
  std::vector<Label> point_;
  std::vector<Label> open_;  // open_[i] is the stretch (bp_[i], bp_[i+1])
  std::optional<Label> tail_;
};

/// Truth of a propositional formula under one label.
bool eval_propositional(const Stl& f, Label l);

/// Three-valued satisfaction at time t; Unknown only when the answer depends
/// on the unknown part of the signal.
Verdict evaluate(const LabelSignal& s, const Stl& f, double t);

/// Breakpoints and labels induced by the predicates along a trajectory.
/// Sign changes of every h_i are located by bisection to 1e-9 s; the crossing
/// instant itself takes the h >= 0 side.  The returned signal has no tail.
LabelSignal signal_of(const Trajectory& traj, std::span<const PredicateFn> preds);

/// Event extraction for segment k = [t0, t1] of a trajectory: appends the
/// crossings later than `last_bp` (the previous breakpoint) to `out`.
struct LabelEvent {
  double t;
  Label point;        // label at t
  Label open_before;  // label on the stretch ending at t
};
void segment_events(const Trajectory& traj, std::size_t k, std::span<const PredicateFn> preds,
                    double last_bp, std::vector<LabelEvent>& out);

/// Label on the open stretch after the last event of segment k (sampled at
/// the midpoint between `from` and the segment end).
Label open_label(const Trajectory& traj, std::size_t k, double from, double to,
                 std::span<const PredicateFn> preds);

class TrajectoryTooShort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact Boolean satisfaction of f at t.  Throws TrajectoryTooShort when the
/// trajectory ends before the verdict is determined (a trajectory covering
/// [0, t + horizon(f)] always determines it).
bool stl_satisfies(const Trajectory& traj, std::span<const PredicateFn> preds, const Stl& f,
                   double t = 0.0);

/// Satisfaction on the piecewise-constant signal realizing a timed word.
bool word_satisfies(const TimedWord& w, const Stl& f, double t = 0.0);

}  // namespace stlta
