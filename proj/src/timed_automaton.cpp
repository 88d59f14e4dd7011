#include "stlta/timed_automaton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace stlta {

std::vector<std::vector<std::size_t>> TimedNfa::out_edges() const {
  std::vector<std::vector<std::size_t>> out(states.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out[edges[e].from].push_back(e);
  return out;
}

std::vector<std::size_t> TimedNfa::successors(std::size_t q, Label sigma, const TimeInterval& extent) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.from == q && e.guard(sigma) && states[e.to].inv.includes(extent)) out.push_back(e.to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> TimedNfa::cut_points() const {
  std::set<double> pts;
  for (const auto& s : states) {
    if (s.inv.empty()) continue;
    pts.insert(s.inv.lo);
    if (s.inv.bounded()) pts.insert(s.inv.hi);
  }
  return {pts.begin(), pts.end()};
}

bool TimedNfa::has_self_loop_true(std::size_t q) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const TimedEdge& e) { return e.from == q && e.to == q && e.guard.is_true(); });
}

TimedNfa to_timed_dfa(const Dfa& d, const TimeInterval& interval) {
  TimedNfa ta;
  for (std::size_t q = 0; q < d.size(); ++q) {
    ta.states.push_back({interval, static_cast<bool>(d.accepting[q]), 0, 0, "q" + std::to_string(q)});
  }
  ta.initial = {d.initial};
  for (std::size_t q = 0; q < d.size(); ++q) {
    for (std::size_t r = 0; r < d.size(); ++r) {
      Guard g = d.guard(q, r);
      if (!g.is_false()) ta.edges.push_back({q, r, std::move(g)});
    }
  }
  return ta;
}

namespace {

// With `timed`, an initial state is only left through the first letter, at
// t = 0, so its edges into states whose invariant misses 0 never fire.
TimedNfa prune_unreachable(const TimedNfa& ta, bool timed = false) {
  std::vector<bool> seen(ta.size(), false);
  std::vector<std::size_t> stack = ta.initial;
  for (std::size_t q : stack) seen[q] = true;
  const auto out = ta.out_edges();
  // Initial states re-entered by some edge behave like ordinary states.
  std::vector<bool> only_initial(ta.size(), false);
  for (std::size_t q : ta.initial) only_initial[q] = timed;
  for (const auto& e : ta.edges) only_initial[e.to] = false;
  while (!stack.empty()) {
    const std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t e : out[q]) {
      const std::size_t r = ta.edges[e].to;
      if (only_initial[q] && !ta.states[r].inv.contains(0.0)) continue;
      if (!seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
    }
  }
  std::vector<std::size_t> remap(ta.size(), kNoState);
  TimedNfa res;
  res.unsatisfiable_branches = ta.unsatisfiable_branches;
  for (std::size_t q = 0; q < ta.size(); ++q) {
    if (!seen[q]) continue;
    remap[q] = res.states.size();
    res.states.push_back(ta.states[q]);
  }
  for (std::size_t q : ta.initial) res.initial.push_back(remap[q]);
  for (const auto& e : ta.edges) {
    if (seen[e.from] && seen[e.to]) res.edges.push_back({remap[e.from], remap[e.to], e.guard});
  }
  return res;
}

// Appends b's states and edges to a; returns the index offset of b.
std::size_t append(TimedNfa& a, const TimedNfa& b) {
  const std::size_t off = a.size();
  a.states.insert(a.states.end(), b.states.begin(), b.states.end());
  for (const auto& e : b.edges) a.edges.push_back({e.from + off, e.to + off, e.guard});
  return off;
}

}  // namespace

TimedNfa connect_branch(const TimedNfa& parent, const TimedNfa& child) {
  TimedNfa res = parent;
  const std::size_t off = append(res, child);
  std::vector<TimedEdge> added;
  for (std::size_t q = 0; q < parent.size(); ++q) {
    if (!parent.states[q].accepting) continue;
    for (std::size_t c0 : child.initial) {
      for (const auto& e : child.edges) {
        if (e.from == c0) added.push_back({q, e.to + off, e.guard});
      }
    }
    res.states[q].accepting = false;
  }
  res.edges.insert(res.edges.end(), added.begin(), added.end());
  return prune_unreachable(res);
}

TimedNfa finalize_accepting(const TimedNfa& ta, const TimeInterval& leaf_interval) {
  TimedNfa res = ta;
  std::size_t fresh = kNoState;
  for (std::size_t q = 0; q < ta.size(); ++q) {
    if (!ta.states[q].accepting || ta.has_self_loop_true(q)) continue;
    if (fresh == kNoState) {
      fresh = res.states.size();
      const TimeInterval inv = TimeInterval::unbounded_from(leaf_interval.hi, !leaf_interval.hi_closed);
      const TimedState& leaf = ta.states[q];
      res.states.push_back({inv, true, leaf.branch, leaf.node + 1, "qF"});
      res.edges.push_back({fresh, fresh, Guard::always({})});
    }
    res.states[q].accepting = false;
    res.edges.push_back({q, fresh, Guard::always({})});
  }
  return res;
}

TimedNfa assemble(const ParseTree& tree) {
  TimedNfa res;
  for (std::size_t b = 0; b < tree.branches.size(); ++b) {
    const auto& branch = tree.branches[b];
    TimedNfa chain;
    for (std::size_t n = 0; n < branch.size(); ++n) {
      const ParseTreeNode& node = branch[n];
      TimedNfa part = to_timed_dfa(ltlf_to_dfa(strip_time(node.formula, node.interval)), node.interval);
      for (auto& s : part.states) {
        s.branch = b;
        s.node = n;
        s.name = "b" + std::to_string(b) + ".n" + std::to_string(n) + "." + s.name;
      }
      chain = n == 0 ? part : connect_branch(chain, part);
    }
    if (branch.empty()) continue;
    chain = finalize_accepting(chain, branch.back().interval);
    for (auto& s : chain.states) {
      if (s.name == "qF") s.name = "b" + std::to_string(b) + ".qF";
    }
    chain = prune_unreachable(chain, true);
    if (std::none_of(chain.states.begin(), chain.states.end(), [](const TimedState& s) { return s.accepting; })) {
      res.unsatisfiable_branches.push_back(b);
    }
    const std::size_t off = append(res, chain);
    for (std::size_t q : chain.initial) res.initial.push_back(q + off);
  }
  return res;
}

std::vector<TimedSymbol> normalize(const LabelSignal& s, std::span<const double> cuts) {
  std::vector<TimedSymbol> out;
  if (s.breakpoints().empty()) return out;
  const double end = s.breakpoints().back();
  const bool tail = s.tail().has_value();
  std::set<double> pts(s.breakpoints().begin(), s.breakpoints().end());
  for (double c : cuts) {
    if (c >= 0.0 && c < kInfinity && (tail || c <= end)) pts.insert(c);
  }
  const std::vector<double> v(pts.begin(), pts.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back({*s.label_at(v[i]), TimeInterval::point(v[i])});
    if (i + 1 < v.size()) {
      out.push_back({*s.label_at(0.5 * (v[i] + v[i + 1])), TimeInterval::open(v[i], v[i + 1])});
    } else if (tail) {
      out.push_back({*s.tail(), TimeInterval::open(v[i], kInfinity)});
    }
  }
  return out;
}

bool accepts_signal(const TimedNfa& ta, const LabelSignal& s) {
  std::vector<bool> cur(ta.size(), false);
  bool any = false;
  for (std::size_t q : ta.initial) {
    if (ta.states[q].accepting) return true;
    cur[q] = true;
    any = true;
  }
  const auto out = ta.out_edges();
  const std::vector<double> cuts = ta.cut_points();
  for (const TimedSymbol& sym : normalize(s, cuts)) {
    if (!any) return false;
    std::vector<bool> next(ta.size(), false);
    any = false;
    for (std::size_t q = 0; q < ta.size(); ++q) {
      if (!cur[q]) continue;
      for (std::size_t e : out[q]) {
        const TimedEdge& edge = ta.edges[e];
        if (next[edge.to] || !edge.guard(sym.sigma) || !ta.states[edge.to].inv.includes(sym.extent)) continue;
        if (ta.states[edge.to].accepting) return true;
        next[edge.to] = true;
        any = true;
      }
    }
    cur = std::move(next);
  }
  return false;
}

bool accepts_timed_word(const TimedNfa& ta, const TimedWord& w) {
  return accepts_signal(ta, LabelSignal::from_word(w));
}

std::string to_dot(const TimedNfa& ta, std::span<const std::string> names) {
  std::ostringstream os;
  os << "digraph timed_nfa {\n  rankdir=LR;\n  start [shape=point];\n";
  for (std::size_t q = 0; q < ta.size(); ++q) {
    const TimedState& s = ta.states[q];
    os << "  s" << q << " [shape=" << (s.accepting ? "doublecircle" : "circle") << ", label=\"" << s.name
       << "\\nt in " << s.inv.to_string() << "\"];\n";
  }
  for (std::size_t q : ta.initial) os << "  start -> s" << q << ";\n";
  for (const auto& e : ta.edges) {
    os << "  s" << e.from << " -> s" << e.to << " [label=\"" << e.guard.to_string(names) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

// Parallel edges are merged into one guard per ordered pair.
std::map<std::pair<std::size_t, std::size_t>, std::vector<const Guard*>> edge_map(const TimedNfa& t) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const Guard*>> m;
  for (const auto& e : t.edges) m[{e.from, e.to}].push_back(&e.guard);
  return m;
}

bool same_union(const std::vector<const Guard*>& a, const std::vector<const Guard*>& b) {
  std::set<std::size_t> sup;
  for (const Guard* g : a) sup.insert(g->support.begin(), g->support.end());
  for (const Guard* g : b) sup.insert(g->support.begin(), g->support.end());
  const std::vector<std::size_t> v(sup.begin(), sup.end());
  for (std::size_t m = 0; m < (std::size_t{1} << v.size()); ++m) {
    Label l = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if ((m >> j) & 1u) l |= Label{1} << v[j];
    }
    const bool x = std::any_of(a.begin(), a.end(), [&](const Guard* g) { return (*g)(l); });
    const bool y = std::any_of(b.begin(), b.end(), [&](const Guard* g) { return (*g)(l); });
    if (x != y) return false;
  }
  return true;
}

}  // namespace

bool isomorphic(const TimedNfa& a, const TimedNfa& b) {
  if (a.size() != b.size() || a.initial.size() != b.initial.size()) return false;
  const auto ea = edge_map(a);
  const auto eb = edge_map(b);
  if (ea.size() != eb.size()) return false;
  const std::set<std::size_t> ia(a.initial.begin(), a.initial.end());
  const std::set<std::size_t> ib(b.initial.begin(), b.initial.end());
  const std::size_t n = a.size();
  std::vector<std::size_t> map(n, kNoState);
  std::vector<bool> used(n, false);

  auto compatible = [&](std::size_t x, std::size_t y) {
    const TimedState& s = a.states[x];
    const TimedState& t = b.states[y];
    return s.inv == t.inv && s.accepting == t.accepting && ia.count(x) == ib.count(y);
  };
  // Checks every edge between already-mapped states.
  auto consistent = [&](std::size_t x) {
    for (std::size_t z = 0; z < n; ++z) {
      if (map[z] == kNoState) continue;
      for (auto [p, q] : {std::pair{x, z}, std::pair{z, x}}) {
        auto fa = ea.find({p, q});
        auto fb = eb.find({map[p], map[q]});
        const bool ha = fa != ea.end(), hb = fb != eb.end();
        if (ha != hb) return false;
        if (ha && !same_union(fa->second, fb->second)) return false;
      }
    }
    return true;
  };
  std::function<bool(std::size_t)> go = [&](std::size_t x) {
    if (x == n) return true;
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || !compatible(x, y)) continue;
      map[x] = y;
      used[y] = true;
      if (consistent(x) && go(x + 1)) return true;
      map[x] = kNoState;
      used[y] = false;
    }
    return false;
  };
  return go(0);
}

}  // namespace stlta
