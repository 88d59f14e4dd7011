#include "stlta/planner.hpp"

#include <algorithm>
#include <chrono>

#include "stlta/separation.hpp"

namespace stlta {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

TimedWord word_of(const LabelSignal& s) {
  TimedWord w;
  const auto& bp = s.breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i) {
    w.push_back({s.point_labels()[i], bp[i]});
    if (i + 1 < bp.size() && s.open_labels()[i] != s.point_labels()[i]) w.push_back({s.open_labels()[i], bp[i]});
  }
  return w;
}

}  // namespace

std::string to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Solved: return "solved";
    case SynthesisStatus::Timeout: return "timeout";
    case SynthesisStatus::Infeasible: return "infeasible";
  }
  return "?";
}

Planner::Planner(const StlSpec& spec, const DynamicsModel& model, std::vector<double> x0, PlannerOptions opts)
    : spec_(spec), model_(model), x0_(std::move(x0)), opts_(opts), rng_(opts.seed) {
  if (x0_.size() != model_.n()) throw std::invalid_argument("x0 has the wrong dimension");
  if (spec_.variables.size() > model_.n()) throw std::invalid_argument("the specification has more variables than the model has states");
  if (!model_.in_bounds(x0_)) throw std::invalid_argument("x0 lies outside the state bounds");
  const auto t0 = Clock::now();
  const TimePartitionSet t = opts_.partition.empty() ? minimal_partition_points(spec_.formula)
                                                     : TimePartitionSet{opts_.partition};
  ta_ = assemble(build_parse_tree(time_partition(spec_.formula, t)));
  graph_ = decompose(model_.state_lo, model_.state_hi, spec_.predicates, opts_.abstraction);
  horizon_ = formula_horizon(spec_.formula);
  product_.emplace(ta_, graph_, std::max(opts_.t_max, horizon_ + 1.0));
  cuts_ = ta_.cut_points();
  setup_seconds_ = seconds_since(t0);
}

const std::vector<std::size_t>& Planner::vertices_in(ProductState z) const {
  static const std::vector<std::size_t> none;
  const auto it = members_.find(product_->id(z));
  return it == members_.end() ? none : it->second;
}

std::size_t Planner::insert(TreeVertex v) {
  const ProductState z{v.q, v.d};
  tree_.push_back(std::move(v));
  members_[product_->id(z)].push_back(tree_.size() - 1);
  product_->vertex_added(z);
  return tree_.size() - 1;
}

std::vector<TreeVertex> Planner::extend(std::size_t vi, std::span<const double> u, double dt) const {
  const TreeVertex& v = tree_[vi];
  double t_end = v.t + dt;
  // Stop exactly on the first invariant boundary so that punctual windows
  // get a vertex of their own.
  const auto cut = std::upper_bound(cuts_.begin(), cuts_.end(), v.t);
  if (cut != cuts_.end() && *cut < t_end) t_end = *cut;

  Trajectory piece;
  piece.times = {v.t};
  piece.states = {v.x};
  propagate(model_, u, t_end, piece, opts_.h);
  for (const auto& x : piece.states) {
    if (!model_.in_bounds(x)) return {};
  }

  std::vector<TimedSymbol> letters;
  std::vector<LabelEvent> events;
  double last = v.t;
  for (std::size_t k = 0; k < piece.segments(); ++k) {
    events.clear();
    segment_events(piece, k, spec_.predicates, last, events);
    for (const auto& e : events) {
      letters.push_back({e.open_before, TimeInterval::open(last, e.t)});
      letters.push_back({e.point, TimeInterval::point(e.t)});
      last = e.t;
    }
  }
  if (t_end > last) {
    letters.push_back({label_of(spec_.predicates, piece.state_at(0.5 * (last + t_end))), TimeInterval::open(last, t_end)});
    letters.push_back({label_of(spec_.predicates, piece.states.back()), TimeInterval::point(t_end)});
  }

  std::vector<std::size_t> current{v.q}, next;
  for (const auto& l : letters) {
    next.clear();
    for (std::size_t q : current) {
      for (std::size_t r : ta_.successors(q, l.sigma, l.extent)) next.push_back(r);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current.swap(next);
    if (current.empty()) return {};
  }

  const std::vector<double>& x = piece.states.back();
  if (!graph_.in_bounds(x)) return {};
  const std::size_t d = graph_.region_of(x);
  std::vector<TreeVertex> out;
  for (std::size_t q : current) {
    TreeVertex c;
    c.x = x;
    c.q = q;
    c.d = d;
    c.t = t_end;
    c.parent = vi;
    c.u.assign(u.begin(), u.end());
    c.dt = t_end - v.t;
    out.push_back(std::move(c));
  }
  return out;
}

bool Planner::validate(const TreeVertex& v) const {
  return model_.in_bounds(v.x) && v.q < ta_.size() && v.d < graph_.regions.size() &&
         ta_.states[v.q].inv.contains(v.t) && label_of(spec_.predicates, v.x) == graph_.regions[v.d].label;
}

std::optional<Solution> Planner::extract(std::size_t vi) const {
  Solution sol;
  for (std::size_t k = vi; k != kNoVertex; k = tree_[k].parent) sol.chain.push_back(tree_[k]);
  std::reverse(sol.chain.begin(), sol.chain.end());
  sol.trajectory = start_trajectory(x0_);
  for (std::size_t i = 1; i < sol.chain.size(); ++i) {
    sol.controls.emplace_back(sol.chain[i].u, sol.chain[i].dt);
    propagate(model_, sol.chain[i].u, sol.chain[i].t, sol.trajectory, opts_.h);
  }
  const LabelSignal s = signal_of(sol.trajectory, spec_.predicates);
  if (evaluate(s, spec_.formula, 0.0) != Verdict::True) return std::nullopt;
  sol.word = word_of(s);
  if (!accepts_signal(ta_, s) || !accepts_timed_word(ta_, sol.word)) return std::nullopt;
  return sol;
}

ProductState Planner::sample_state(const std::vector<ProductState>& c) {
  std::vector<double> w;
  w.reserve(c.size());
  for (const auto& z : c) w.push_back(product_->weight(z));
  if (std::none_of(w.begin(), w.end(), [](double x) { return x > 0.0; })) std::fill(w.begin(), w.end(), 1.0);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return c[pick(rng_)];
}

SynthesisResult Planner::run() {
  const auto start = Clock::now();
  SynthesisResult res;
  res.seed = opts_.seed;
  res.stats.regions = graph_.regions.size();
  res.stats.automaton_states = ta_.size();
  res.stats.setup_seconds = setup_seconds_;
  auto finish = [&](SynthesisStatus st, std::string msg) {
    res.status = st;
    res.message = std::move(msg);
    res.stats.vertices = tree_.size();
    res.stats.search_seconds = seconds_since(start);
    res.stats.total_seconds = res.stats.search_seconds + (opts_.include_setup ? setup_seconds_ : 0.0);
    return res;
  };
  const double budget = opts_.t_max - (opts_.include_setup ? setup_seconds_ : 0.0);
  auto out_of_time = [&] { return seconds_since(start) > budget; };
  auto out_of_extensions = [&] { return opts_.max_extensions && res.stats.extensions >= opts_.max_extensions; };
  auto try_accept = [&](std::size_t vi) {
    const TreeVertex& v = tree_[vi];
    if (!ta_.accepting(v.q)) return false;
    if (auto sol = extract(vi)) {
      res.solution = std::move(sol);
      return true;
    }
    ++res.stats.rejected_candidates;
    return false;
  };

  tree_.clear();
  members_.clear();
  for (const ProductState& z : product_->initial(x0_)) {
    TreeVertex root;
    root.x = x0_;
    root.q = z.q;
    root.d = z.d;
    if (!validate(root)) continue;
    if (try_accept(insert(root))) return finish(SynthesisStatus::Solved, "");
  }
  if (tree_.empty()) return finish(SynthesisStatus::Infeasible, "the initial state admits no automaton run");

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    if (out_of_time() || out_of_extensions()) return finish(SynthesisStatus::Timeout, "budget exhausted");
    std::vector<ProductState> sources;
    for (const auto& [id, vs] : members_) sources.push_back(product_->state(id));
    std::sort(sources.begin(), sources.end(),
              [&](auto a, auto b) { return product_->id(a) < product_->id(b); });
    const auto lead = product_->compute_lead(sources);
    if (!lead) return finish(SynthesisStatus::Infeasible, "no accepting product path from the tree");
    ++res.stats.leads;
    std::vector<std::size_t> lead_ids;
    for (const auto& z : lead->states) lead_ids.push_back(product_->id(z));
    std::sort(lead_ids.begin(), lead_ids.end());
    std::vector<ProductState> available;
    for (const auto& z : lead->states) {
      if (!vertices_in(z).empty() &&
          std::find(available.begin(), available.end(), z) == available.end()) {
        available.push_back(z);
      }
    }

    for (std::size_t it = 0; it < opts_.explore_iterations && !available.empty(); ++it) {
      if (out_of_time() || out_of_extensions()) break;
      const ProductState z = sample_state(available);
      product_->selected(z);
      const auto& vs = vertices_in(z);
      const std::size_t vi = vs[std::uniform_int_distribution<std::size_t>(0, vs.size() - 1)(rng_)];
      if (tree_[vi].t > horizon_) continue;  // nothing left to decide
      std::vector<double> u(model_.c());
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = model_.control_lo[i] + (model_.control_hi[i] - model_.control_lo[i]) * unit(rng_);
      }
      const double dt = opts_.dt_min + (opts_.dt_max - opts_.dt_min) * unit(rng_);
      ++res.stats.extensions;
      for (TreeVertex& c : extend(vi, u, dt)) {
        if (!validate(c)) continue;
        const ProductState zc{c.q, c.d};
        const std::size_t ci = insert(std::move(c));
        if (try_accept(ci)) return finish(SynthesisStatus::Solved, "");
        if (std::binary_search(lead_ids.begin(), lead_ids.end(), product_->id(zc)) &&
            std::find(available.begin(), available.end(), zc) == available.end()) {
          available.push_back(zc);
        }
      }
    }
  }
}

SynthesisResult synthesize(const StlSpec& spec, const DynamicsModel& model, std::vector<double> x0,
                           const PlannerOptions& opts) {
  Planner p(spec, model, std::move(x0), opts);
  return p.run();
}

}  // namespace stlta
