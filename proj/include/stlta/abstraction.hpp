#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlta/formula.hpp"

namespace stlta {

/// One cell of the workspace partition.  Geometry is a convex polygon when
/// the abstraction is an exact line arrangement and an axis-aligned box
/// otherwise; coordinates refer to the abstraction's `dims`.
struct Region {
  std::size_t id = 0;
  Label label = 0;
  double volume = 0.0;
  bool pure = true;
  std::vector<std::array<double, 2>> polygon;
  std::vector<double> lo, hi;
  std::vector<double> centroid;

  bool is_polygon() const { return !polygon.empty(); }
};

struct AbstractionOptions {
  int max_depth = 8;
  double max_impure_fraction = 0.2;
};

class AbstractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AbstractionGraph {
 public:
  /// State components the predicates depend on, and their bounds.
  std::vector<std::size_t> dims;
  std::vector<double> lo, hi;
  std::vector<PredicateFn> predicates;
  std::vector<Region> regions;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted neighbour ids

  /// Region containing the full state x.  On shared boundaries the region
  /// whose label matches the predicates at x wins, then the smallest id.
  /// Throws std::out_of_range when x lies outside the bounds.
  std::size_t region_of(std::span<const double> x) const;
  bool in_bounds(std::span<const double> x) const;
  bool region_contains(std::size_t r, std::span<const double> x) const;

  std::size_t edge_count() const;
  double total_volume() const;
  double impure_fraction() const;

  /// Bucket grid for region_of; built by decompose.
  void build_index();

 private:
  std::size_t cells_per_dim_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
  std::size_t bucket_of(std::span<const double> p) const;
  std::vector<double> project(std::span<const double> x) const;
};

/// Partitions the box [lo, hi] of the full state space into regions on which
/// every predicate has constant truth.  Linear predicates over at most two
/// variables give an exact line arrangement; anything else uses adaptive box
/// refinement certified by interval bounds (cells still straddling a
/// predicate at `max_depth` are kept and marked impure).
AbstractionGraph decompose(std::span<const double> lo, std::span<const double> hi,
                           std::vector<PredicateFn> predicates, const AbstractionOptions& opts = {});

/// Text listing: one `region` line per cell and one `edge` line per pair.
std::string dump_abstraction(const AbstractionGraph& g, std::span<const std::string> state_names);

}  // namespace stlta
