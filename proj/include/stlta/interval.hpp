#pragma once

#include <limits>
#include <string>

namespace stlta {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A time interval <lo, hi> with independently open or closed endpoints.
///
/// Membership tests are exact (no epsilon). An interval with hi == +inf is
/// only used for the absorbing accepting states of a timed automaton.
struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static TimeInterval closed(double a, double b) { return {a, b, true, true}; }
  static TimeInterval point(double t) { return {t, t, true, true}; }
  static TimeInterval open(double a, double b) { return {a, b, false, false}; }
  static TimeInterval unbounded_from(double a, bool closed) {
    return {a, kInfinity, closed, false};
  }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
  }
  bool is_point() const { return lo == hi && lo_closed && hi_closed; }
  bool bounded() const { return hi < kInfinity; }

  bool contains(double t) const {
    if (t < lo || t > hi) return false;
    if (t == lo && !lo_closed) return false;
    if (t == hi && !hi_closed) return false;
    return true;
  }

  /// True when the open interval (a, b) with a < b lies inside this interval.
  bool contains_open(double a, double b) const { return a >= lo && b <= hi; }

  /// Length of the interval; infinite for unbounded ones.
  double length() const { return empty() ? 0.0 : hi - lo; }

  /// Does this interval share at least one point with `o`?
  bool intersects(const TimeInterval& o) const;

  /// Is `o` a subset of this interval?
  bool includes(const TimeInterval& o) const;

  /// Pieces strictly before, at and after `t`, restricted to this interval.
  /// Empty pieces are returned as empty intervals.
  TimeInterval before(double t) const { return {lo, t, lo_closed, false}; }
  TimeInterval through(double t) const { return {lo, t, lo_closed, true}; }
  TimeInterval after(double t) const { return {t, hi, false, hi_closed}; }
  TimeInterval from(double t) const { return {t, hi, true, hi_closed}; }

  /// Shift both endpoints by `dt`.
  TimeInterval shifted(double dt) const { return {lo + dt, hi + dt, lo_closed, hi_closed}; }

  /// Sort key: by lower bound, closed lower bounds first.
  bool starts_before(const TimeInterval& o) const {
    if (lo != o.lo) return lo < o.lo;
    return lo_closed && !o.lo_closed;
  }

  std::string to_string() const;

  friend bool operator==(const TimeInterval& a, const TimeInterval& b) {
    if (a.empty() && b.empty()) return true;
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
  friend bool operator!=(const TimeInterval& a, const TimeInterval& b) { return !(a == b); }
};

/// Intersection of two intervals (possibly empty).
TimeInterval intersection(const TimeInterval& a, const TimeInterval& b);

/// Formats a time value without trailing zeros ("6", "0.5", "18.25").
std::string format_time(double t);

}  // namespace stlta
