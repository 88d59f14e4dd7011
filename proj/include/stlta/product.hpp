#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "stlta/abstraction.hpp"
#include "stlta/timed_automaton.hpp"

namespace stlta {

/// 1 + the number of edges from q to an accepting state; kUnreachable when
/// none is reachable.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();
std::vector<std::size_t> dist_from_acc(const TimedNfa& ta);

/// Eq. 3 weight of one product state.
double state_weight(double cov, double numsel, double volume, double duration, double dist);

struct ProductState {
  std::size_t q = 0;
  std::size_t d = 0;
  friend bool operator==(const ProductState&, const ProductState&) = default;
};

struct Lead {
  std::vector<ProductState> states;
  double cost = 0.0;
};

/// Product of the timed automaton with the abstraction graph.  A move
/// (q,d) -> (q',d') exists iff d' is d or a neighbour of d and q' is a
/// successor of q under the label of d (time is ignored here).  Staying in d
/// is allowed so that the automaton can advance while time passes.  Successors
/// are computed on demand.
class ProductAutomaton {
 public:
  ProductAutomaton(const TimedNfa& ta, const AbstractionGraph& m, double t_max);

  std::size_t size() const { return nq_ * nd_; }
  std::size_t id(ProductState z) const { return z.q * nd_ + z.d; }
  ProductState state(std::size_t id) const { return {id / nd_, id % nd_}; }
  bool accepting(ProductState z) const { return ta_.states[z.q].accepting; }

  const std::vector<std::size_t>& successors(std::size_t id) const;

  /// Automaton states after the first letter (the label of x0 at t = 0),
  /// paired with the region of x0.
  std::vector<ProductState> initial(std::span<const double> x0) const;

  double duration(std::size_t q) const { return duration_[q]; }
  std::size_t dist(std::size_t q) const { return dist_[q]; }
  double weight(ProductState z) const;

  void vertex_added(ProductState z) { ++cov_[id(z)]; }
  void selected(ProductState z) { ++numsel_[id(z)]; }
  double cov(ProductState z) const { return cov_[id(z)]; }
  double numsel(ProductState z) const { return numsel_[id(z)]; }

  /// Shortest path under 1 / (w(z1) w(z2)) edge costs from any of `sources`
  /// to an accepting state; ties go to the smaller state id.  A source z
  /// costs 1 / w(z)^2 to enter.
  std::optional<Lead> compute_lead(const std::vector<ProductState>& sources) const;

  const TimedNfa& automaton() const { return ta_; }
  const AbstractionGraph& abstraction() const { return m_; }

 private:
  const TimedNfa& ta_;
  const AbstractionGraph& m_;
  std::size_t nq_, nd_;
  std::vector<std::vector<std::size_t>> ta_out_;
  std::vector<double> duration_;
  std::vector<std::size_t> dist_;
  std::vector<double> cov_, numsel_;
  mutable std::vector<std::vector<std::size_t>> succ_;
  mutable std::vector<bool> expanded_;
};

}  // namespace stlta
