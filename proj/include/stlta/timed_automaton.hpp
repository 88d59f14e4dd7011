#pragma once

#include <span>
#include <string>
#include <vector>

#include "stlta/ltlf.hpp"
#include "stlta/monitor.hpp"
#include "stlta/separation.hpp"

namespace stlta {

struct TimedState {
  TimeInterval inv;
  bool accepting = false;
  std::size_t branch = 0;  // parse-tree branch
  std::size_t node = 0;    // position along the branch
  std::string name;
};

struct TimedEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Guard guard;
};

/// Timed NFA with one invariant per state.  A letter (sigma, extent), where
/// the extent is an instant or an open stretch, moves q to q' along an edge
/// whose guard holds on sigma, provided the extent lies inside Inv(q').
/// Acceptance is reached as soon as a run enters an accepting state.
struct TimedNfa {
  std::vector<TimedState> states;
  std::vector<std::size_t> initial;
  std::vector<TimedEdge> edges;
  std::vector<std::size_t> unsatisfiable_branches;

  std::size_t size() const { return states.size(); }
  bool accepting(std::size_t q) const { return states[q].accepting; }
  /// Outgoing edge indices per state.
  std::vector<std::vector<std::size_t>> out_edges() const;
  /// Successors of q under one letter.
  std::vector<std::size_t> successors(std::size_t q, Label sigma, const TimeInterval& extent) const;
  /// Sorted finite invariant endpoints.
  std::vector<double> cut_points() const;
  bool has_self_loop_true(std::size_t q) const;
};

TimedNfa to_timed_dfa(const Dfa& d, const TimeInterval& interval);

/// Appends `child` after `parent`: every accepting state of the parent gets
/// the outgoing edges of the child's initial state, then stops accepting.
/// States that become unreachable are removed.
TimedNfa connect_branch(const TimedNfa& parent, const TimedNfa& child);

/// Absorbing accepting states (true self-loop) stay accepting; the others
/// stop accepting and get a true edge to a fresh absorbing accepting state
/// whose invariant starts right after the leaf interval.
TimedNfa finalize_accepting(const TimedNfa& ta, const TimeInterval& leaf_interval);

/// DFA of every node, chained along each branch, finalized and united.
TimedNfa assemble(const ParseTree& tree);

/// Letters of the signal cut at `cuts` (and its own breakpoints), running to
/// infinity when the signal has a tail and to its known end otherwise.
struct TimedSymbol {
  Label sigma = 0;
  TimeInterval extent;
};
std::vector<TimedSymbol> normalize(const LabelSignal& s, std::span<const double> cuts);

bool accepts_signal(const TimedNfa& ta, const LabelSignal& s);
bool accepts_timed_word(const TimedNfa& ta, const TimedWord& w);

/// Graphviz description with invariants and guards.
std::string to_dot(const TimedNfa& ta, std::span<const std::string> names);

/// Same shape: bijection on states preserving invariants, acceptance,
/// initial states and guards (compared as Boolean functions).
bool isomorphic(const TimedNfa& a, const TimedNfa& b);

}  // namespace stlta
