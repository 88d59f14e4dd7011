#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlta/formula.hpp"

namespace stlta {

/// Strictly increasing cut times starting at 0.
struct TimePartitionSet {
  std::vector<double> points;
};

/// One element of a partitioned clause: a formula whose temporal operators
/// all carry `interval` (or a propositional formula over [0,0]).
struct Conjunct {
  Stl formula;
  TimeInterval interval;
};

/// Conjuncts ordered by time; consecutive intervals are contiguous and start
/// at 0.
struct PartitionedClause {
  std::vector<Conjunct> conjuncts;

  std::string to_string(std::span<const std::string> names) const;
};

class SeparationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time separation of an Until node at tau (a <= tau <= b):
///   phi U<a,tau) phi'  |  ( G[0,tau) phi  &  ( F[tau,tau](phi & phi')  |  phi U(tau,b> phi' ) )
/// The point disjunct appears iff tau lies in the original interval and empty
/// intervals are dropped; trivial parts (true operands) are simplified.
Stl separate_until(const Stl& until, double tau);

/// Light structural simplification (true/false absorption, F/G of true,
/// until with a true left operand).
Stl simplify(const Stl& f);

/// {0} plus every temporal interval endpoint, minus the largest one.
TimePartitionSet minimal_partition_points(const Stl& f);

/// Throws SeparationError unless T starts at 0 and strictly increases.
void validate_partition(const TimePartitionSet& t);

/// Separates f at every point of T, pushes negations to the predicates,
/// expands into DNF and aligns each clause so that every conjunct carries a
/// single interval.  Clauses with a propositionally contradictory point
/// conjunct are dropped, duplicates removed.  Throws SeparationError when T
/// lacks a minimal point or more than `max_clauses` clauses arise.
std::vector<PartitionedClause> time_partition(const Stl& f, const TimePartitionSet& t,
                                              std::size_t max_clauses = 4096);

struct ParseTreeNode {
  Stl formula;
  TimeInterval interval;
};

/// Virtual root with one chain of nodes per clause.
struct ParseTree {
  std::vector<std::vector<ParseTreeNode>> branches;

  std::size_t node_count() const;
};

ParseTree build_parse_tree(const std::vector<PartitionedClause>& clauses);

}  // namespace stlta
