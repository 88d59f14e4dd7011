#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "stlta/abstraction.hpp"
#include "stlta/dynamics.hpp"
#include "stlta/product.hpp"
#include "stlta/timed_automaton.hpp"

namespace stlta {

inline constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();

struct TreeVertex {
  std::vector<double> x;
  std::size_t q = 0;
  std::size_t d = 0;
  double t = 0.0;
  std::size_t parent = kNoVertex;
  std::vector<double> u;  // control held since the parent
  double dt = 0.0;
};

struct PlannerOptions {
  double t_max = 30.0;                   // wall-clock budget (s)
  std::size_t explore_iterations = 200;  // extensions per lead
  std::size_t max_extensions = 0;        // 0 = unlimited
  double dt_min = 0.05;
  double dt_max = 1.0;
  double h = kRk4Step;
  std::uint64_t seed = 1;
  bool include_setup = false;     // count abstraction/automaton time against t_max
  std::vector<double> partition;  // time partition points; empty = minimal
  AbstractionOptions abstraction;
};

struct Solution {
  std::vector<TreeVertex> chain;  // root first
  std::vector<std::pair<std::vector<double>, double>> controls;
  Trajectory trajectory;
  TimedWord word;
};

enum class SynthesisStatus { Solved, Timeout, Infeasible };
std::string to_string(SynthesisStatus s);

struct SynthesisStats {
  double setup_seconds = 0.0;   // abstraction + automaton
  double search_seconds = 0.0;
  double total_seconds = 0.0;   // search, plus setup with include_setup
  std::size_t regions = 0;
  std::size_t automaton_states = 0;
  std::size_t vertices = 0;
  std::size_t extensions = 0;
  std::size_t leads = 0;
  std::size_t rejected_candidates = 0;  // accepting vertices the monitor refused
};

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::Timeout;
  std::optional<Solution> solution;
  SynthesisStats stats;
  std::uint64_t seed = 0;
  std::string message;
};

/// Automaton-guided sampling-based synthesis.  Construction builds the
/// abstraction, the timed automaton and the product; run() grows the tree
/// along leads until an accepting vertex is found or the budget runs out.
class Planner {
 public:
  Planner(const StlSpec& spec, const DynamicsModel& model, std::vector<double> x0, PlannerOptions opts = {});

  SynthesisResult run();

  /// Candidates reached from vertex v under (u, dt) before validation: one per
  /// automaton state the letters lead to.  dt is cut at the first invariant
  /// boundary inside (v.t, v.t + dt).  Empty when the motion leaves X or the
  /// automaton has no run.
  std::vector<TreeVertex> extend(std::size_t v, std::span<const double> u, double dt) const;
  bool validate(const TreeVertex& v) const;
  /// Re-simulates the path to v; nullopt when the monitor or the automaton
  /// rejects it.
  std::optional<Solution> extract(std::size_t v) const;

  std::size_t insert(TreeVertex v);
  const std::vector<TreeVertex>& tree() const { return tree_; }
  const std::vector<std::size_t>& vertices_in(ProductState z) const;

  const TimedNfa& automaton() const { return ta_; }
  const AbstractionGraph& abstraction() const { return graph_; }
  const ProductAutomaton& product() const { return *product_; }
  ProductAutomaton& product() { return *product_; }
  const DynamicsModel& model() const { return model_; }
  double horizon() const { return horizon_; }
  const std::vector<double>& cuts() const { return cuts_; }
  std::mt19937_64& rng() { return rng_; }

  /// Samples a product state of C proportionally to its weight.
  ProductState sample_state(const std::vector<ProductState>& c);

 private:
  StlSpec spec_;
  DynamicsModel model_;
  std::vector<double> x0_;
  PlannerOptions opts_;
  TimedNfa ta_;
  AbstractionGraph graph_;
  std::optional<ProductAutomaton> product_;
  std::vector<double> cuts_;
  double horizon_ = 0.0;
  double setup_seconds_ = 0.0;
  std::mt19937_64 rng_;
  std::vector<TreeVertex> tree_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> members_;
};

SynthesisResult synthesize(const StlSpec& spec, const DynamicsModel& model, std::vector<double> x0,
                           const PlannerOptions& opts = {});

}  // namespace stlta
