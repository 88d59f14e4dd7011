#include "stlta/separation.hpp"

#include <algorithm>
#include <set>

#include "stlta/monitor.hpp"

namespace stlta {

namespace {

Stl negate(const Stl& f) { return f->kind == NodeKind::Not ? f->children[0] : mk_not(f); }

bool is_true(const Stl& f) { return f->kind == NodeKind::True; }

}  // namespace

Stl simplify(const Stl& f) {
  switch (f->kind) {
    case NodeKind::True:
    case NodeKind::Predicate:
      return f;
    case NodeKind::Not: {
      Stl c = simplify(f->children[0]);
      if (c->kind == NodeKind::Not) return c->children[0];
      return mk_not(c);
    }
    case NodeKind::And: {
      std::vector<Stl> kept;
      for (const auto& c : f->children) {
        Stl s = simplify(c);
        if (is_false(s)) return mk_false();
        if (!is_true(s)) kept.push_back(s);
      }
      return mk_and(std::move(kept));
    }
    case NodeKind::Or: {
      std::vector<Stl> kept;
      for (const auto& c : f->children) {
        Stl s = simplify(c);
        if (is_true(s)) return mk_true();
        if (!is_false(s)) kept.push_back(s);
      }
      return mk_or(std::move(kept));
    }
    case NodeKind::Eventually:
    case NodeKind::Globally: {
      Stl c = simplify(f->children[0]);
      if (is_true(c)) return mk_true();
      if (is_false(c)) return mk_false();
      return f->kind == NodeKind::Eventually ? mk_eventually(f->interval, c) : mk_globally(f->interval, c);
    }
    case NodeKind::Until:
    case NodeKind::SegmentUntil: {
      Stl a = simplify(f->children[0]);
      Stl b = simplify(f->children[1]);
      if (is_false(b)) return mk_false();
      if (is_true(a)) return mk_eventually(f->interval, b);
      return f->kind == NodeKind::Until ? mk_until(f->interval, a, b) : mk_segment_until(f->interval, a, b);
    }
  }
  return f;
}

Stl separate_until(const Stl& until, double tau) {
  if (until->kind != NodeKind::Until) throw SeparationError("separate_until expects an until formula");
  const TimeInterval& i = until->interval;
  if (tau < i.lo || tau > i.hi) {
    throw SeparationError("separation point " + format_time(tau) + " outside " + i.to_string());
  }
  const Stl& phi = until->children[0];
  const Stl& psi = until->children[1];
  std::vector<Stl> later;
  if (i.contains(tau)) later.push_back(mk_eventually(TimeInterval::point(tau), mk_and(phi, psi)));
  const TimeInterval right = i.after(tau);
  if (!right.empty()) later.push_back(mk_until(right, phi, psi));
  std::vector<Stl> parts;
  const TimeInterval left = i.before(tau);
  if (!left.empty()) parts.push_back(mk_until(left, phi, psi));
  if (!later.empty()) {
    const TimeInterval pre{0.0, tau, true, false};
    Stl guard = pre.empty() ? mk_true() : mk_globally(pre, phi);
    parts.push_back(mk_and(guard, mk_or(later)));
  }
  return simplify(mk_or(parts));
}

TimePartitionSet minimal_partition_points(const Stl& f) {
  std::set<double> pts{0.0};
  std::vector<const StlNode*> stack{f.get()};
  while (!stack.empty()) {
    const StlNode* n = stack.back();
    stack.pop_back();
    if (is_temporal(n->kind)) {
      pts.insert(n->interval.lo);
      pts.insert(n->interval.hi);
    }
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  if (pts.size() > 1) pts.erase(std::prev(pts.end()));
  return {std::vector<double>(pts.begin(), pts.end())};
}

void validate_partition(const TimePartitionSet& t) {
  if (t.points.empty() || t.points.front() != 0.0) throw SeparationError("partition set must start at 0");
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    if (!(t.points[i] > t.points[i - 1])) throw SeparationError("partition points must strictly increase");
  }
}

std::string PartitionedClause::to_string(std::span<const std::string> names) const {
  std::string out;
  for (const auto& c : conjuncts) {
    if (is_true(c.formula)) continue;
    if (!out.empty()) out += " & ";
    out += stlta::to_string(c.formula, names);
  }
  return out.empty() ? "true" : out;
}

std::size_t ParseTree::node_count() const {
  std::size_t n = 0;
  for (const auto& b : branches) n += b.size();
  return n;
}

ParseTree build_parse_tree(const std::vector<PartitionedClause>& clauses) {
  ParseTree tree;
  for (const auto& c : clauses) {
    std::vector<ParseTreeNode> chain;
    for (const auto& k : c.conjuncts) chain.push_back({k.formula, k.interval});
    tree.branches.push_back(std::move(chain));
  }
  return tree;
}

namespace {

// phi U_I phi' == G_pre phi & phi S_I phi', pre = [0,a) or [0,a].
Stl lower_until(const Stl& f) {
  if (!has_temporal(f)) return f;
  if (f->kind == NodeKind::Until) {
    const TimeInterval& i = f->interval;
    const TimeInterval pre{0.0, i.lo, true, !i.lo_closed};
    Stl s = mk_segment_until(i, f->children[0], f->children[1]);
    return pre.empty() ? s : mk_and(mk_globally(pre, f->children[0]), s);
  }
  if (is_temporal(f->kind)) return f;
  std::vector<Stl> kids;
  for (const auto& c : f->children) kids.push_back(lower_until(c));
  switch (f->kind) {
    case NodeKind::Not:
      return mk_not(kids[0]);
    case NodeKind::And:
      return mk_and(std::move(kids));
    case NodeKind::Or:
      return mk_or(std::move(kids));
    default:
      return f;
  }
}

// Splits every operator whose interval has tau strictly inside.
Stl split_at(const Stl& f, double tau) {
  if (!has_temporal(f)) return f;
  if (is_temporal(f->kind)) {
    const TimeInterval& i = f->interval;
    if (!(i.lo < tau && tau < i.hi)) return f;
    const TimeInterval pt = TimeInterval::point(tau);
    const Stl& a = f->children[0];
    switch (f->kind) {
      case NodeKind::Globally:
        return mk_and({mk_globally(i.before(tau), a), mk_globally(pt, a), mk_globally(i.after(tau), a)});
      case NodeKind::Eventually:
        return mk_or({mk_eventually(i.through(tau), a), mk_eventually(pt, a), mk_eventually(i.after(tau), a)});
      case NodeKind::SegmentUntil: {
        const Stl& b = f->children[1];
        return mk_or({mk_segment_until(i.through(tau), a, b),
                      mk_and(mk_globally(i.before(tau), a), mk_segment_until(pt, a, b)),
                      mk_and(mk_globally(i.through(tau), a), mk_segment_until(i.after(tau), a, b))});
      }
      default:
        throw std::logic_error("until must be lowered before splitting");
    }
  }
  std::vector<Stl> kids;
  for (const auto& c : f->children) kids.push_back(split_at(c, tau));
  switch (f->kind) {
    case NodeKind::Not:
      return mk_not(kids[0]);
    case NodeKind::And:
      return mk_and(std::move(kids));
    case NodeKind::Or:
      return mk_or(std::move(kids));
    default:
      return f;
  }
}

enum class LitKind { Prop, G, F, S, NS };

struct Lit {
  LitKind kind;
  TimeInterval iv;
  Stl a;
  Stl b;  // S / NS right operand
};

using Clause = std::vector<Lit>;
using Dnf = std::vector<Clause>;

class ClauseLimit {
 public:
  explicit ClauseLimit(std::size_t max) : max_(max) {}
  void check(std::size_t n) const {
    if (n > max_) {
      throw SeparationError("DNF expansion exceeds " + std::to_string(max_) + " clauses");
    }
  }

 private:
  std::size_t max_;
};

Dnf product(const Dnf& x, const Dnf& y, const ClauseLimit& lim) {
  lim.check(x.size() * y.size());
  Dnf out;
  for (const auto& c : x) {
    for (const auto& d : y) {
      Clause e = c;
      e.insert(e.end(), d.begin(), d.end());
      out.push_back(std::move(e));
    }
  }
  return out;
}

// Negation normal form and DNF in one pass.
Dnf to_dnf(const Stl& f, bool neg, const ClauseLimit& lim) {
  if (!has_temporal(f)) {
    if (is_true(f)) return neg ? Dnf{} : Dnf{Clause{}};
    if (is_false(f)) return neg ? Dnf{Clause{}} : Dnf{};
    return {Clause{Lit{LitKind::Prop, TimeInterval::point(0.0), neg ? negate(f) : f, nullptr}}};
  }
  const TimeInterval& i = f->interval;
  switch (f->kind) {
    case NodeKind::Not:
      return to_dnf(f->children[0], !neg, lim);
    case NodeKind::And:
    case NodeKind::Or: {
      const bool conj = (f->kind == NodeKind::And) != neg;
      Dnf acc = conj ? Dnf{Clause{}} : Dnf{};
      for (const auto& c : f->children) {
        Dnf d = to_dnf(c, neg, lim);
        if (conj) {
          acc = product(acc, d, lim);
        } else {
          acc.insert(acc.end(), d.begin(), d.end());
          lim.check(acc.size());
        }
      }
      return acc;
    }
    case NodeKind::Globally:
      return {Clause{neg ? Lit{LitKind::F, i, negate(f->children[0]), nullptr}
                         : Lit{LitKind::G, i, f->children[0], nullptr}}};
    case NodeKind::Eventually:
      return {Clause{neg ? Lit{LitKind::G, i, negate(f->children[0]), nullptr}
                         : Lit{LitKind::F, i, f->children[0], nullptr}}};
    case NodeKind::SegmentUntil:
      return {Clause{Lit{neg ? LitKind::NS : LitKind::S, i, f->children[0], f->children[1]}}};
    default:
      throw std::logic_error("unexpected node in separated formula");
  }
}

// A cut separates time just before t (t goes right) or just after t (t goes left).
struct Cut {
  double t;
  bool after;
};

std::pair<TimeInterval, TimeInterval> cut_interval(const TimeInterval& i, Cut c) {
  return {TimeInterval{i.lo, c.t, i.lo_closed, c.after}, TimeInterval{c.t, i.hi, !c.after, i.hi_closed}};
}

bool splits(const TimeInterval& i, Cut c) {
  auto [l, r] = cut_interval(i, c);
  return !l.empty() && !r.empty();
}

std::vector<Cut> boundary_cuts(const TimeInterval& j) {
  return {Cut{j.lo, !j.lo_closed}, Cut{j.hi, j.hi_closed}};
}

// Equivalent alternatives (a DNF over literals) for `l` cut in two.
Dnf cut_literal(const Lit& l, Cut c) {
  auto [left, right] = cut_interval(l.iv, c);
  switch (l.kind) {
    case LitKind::G:
      return {{Lit{LitKind::G, left, l.a, nullptr}, Lit{LitKind::G, right, l.a, nullptr}}};
    case LitKind::F:
      return {{Lit{LitKind::F, left, l.a, nullptr}}, {Lit{LitKind::F, right, l.a, nullptr}}};
    case LitKind::S:
      return {{Lit{LitKind::S, left, l.a, l.b}},
              {Lit{LitKind::G, left, l.a, nullptr}, Lit{LitKind::S, right, l.a, l.b}}};
    case LitKind::NS:
      return {{Lit{LitKind::NS, left, l.a, l.b}, Lit{LitKind::F, left, negate(l.a), nullptr}},
              {Lit{LitKind::NS, left, l.a, l.b}, Lit{LitKind::NS, right, l.a, l.b}}};
    case LitKind::Prop:
      break;
  }
  throw std::logic_error("propositional literal cannot be cut");
}

// Splits overlapping literals until all intervals in each clause are equal or
// disjoint.
Dnf align(Dnf clauses, const ClauseLimit& lim) {
  std::reverse(clauses.begin(), clauses.end());  // used as a stack
  Dnf done;
  while (!clauses.empty()) {
    Clause c = std::move(clauses.back());
    clauses.pop_back();
    bool split = false;
    for (std::size_t x = 0; x < c.size() && !split; ++x) {
      for (std::size_t y = 0; y < c.size() && !split; ++y) {
        if (x == y || c[x].iv == c[y].iv || !c[x].iv.intersects(c[y].iv)) continue;
        for (Cut cut : boundary_cuts(c[y].iv)) {
          if (!splits(c[x].iv, cut)) continue;
          const Dnf alts = cut_literal(c[x], cut);
          // Push in reverse so the first alternative is processed first.
          for (auto it = alts.rbegin(); it != alts.rend(); ++it) {
            Clause n;
            n.reserve(c.size() + it->size());
            for (std::size_t k = 0; k < c.size(); ++k) {
              if (k != x) n.push_back(c[k]);
            }
            n.insert(n.begin() + static_cast<std::ptrdiff_t>(x), it->begin(), it->end());
            clauses.push_back(std::move(n));
          }
          split = true;
          break;
        }
      }
    }
    if (!split) {
      done.push_back(std::move(c));
      lim.check(done.size());
    }
    lim.check(clauses.size());
  }
  return done;
}

Stl literal_formula(const Lit& l) {
  switch (l.kind) {
    case LitKind::Prop:
      return l.a;
    case LitKind::G:
      return mk_globally(l.iv, l.a);
    case LitKind::F:
      return mk_eventually(l.iv, l.a);
    case LitKind::S:
      return mk_segment_until(l.iv, l.a, l.b);
    case LitKind::NS:
      return mk_not(mk_segment_until(l.iv, l.a, l.b));
  }
  return nullptr;
}

// What a literal demands at a single instant.
Stl point_constraint(const Lit& l) {
  switch (l.kind) {
    case LitKind::Prop:
    case LitKind::G:
    case LitKind::F:
      return l.a;
    case LitKind::S:
      return mk_and(l.a, l.b);
    case LitKind::NS:
      return mk_not(mk_and(l.a, l.b));
  }
  return nullptr;
}

void collect_preds(const Stl& f, std::set<std::size_t>& out) {
  if (f->kind == NodeKind::Predicate) out.insert(f->pred);
  for (const auto& c : f->children) collect_preds(c, out);
}

bool satisfiable(const Stl& f) {
  std::set<std::size_t> ps;
  collect_preds(f, ps);
  if (ps.size() > 20) return true;
  const std::vector<std::size_t> v(ps.begin(), ps.end());
  for (std::size_t m = 0; m < (std::size_t{1} << v.size()); ++m) {
    Label l = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if ((m >> j) & 1u) l |= Label{1} << v[j];
    }
    if (eval_propositional(f, l)) return true;
  }
  return false;
}

}  // namespace

std::vector<PartitionedClause> time_partition(const Stl& f, const TimePartitionSet& t, std::size_t max_clauses) {
  validate_partition(t);
  for (double m : minimal_partition_points(f).points) {
    if (!std::binary_search(t.points.begin(), t.points.end(), m)) {
      throw SeparationError("partition set lacks the minimal point " + format_time(m));
    }
  }
  const ClauseLimit lim(max_clauses);

  Stl g = lower_until(f);
  for (double tau : t.points) g = split_at(g, tau);
  const Dnf aligned = align(to_dnf(g, false, lim), lim);

  std::vector<PartitionedClause> out;
  std::set<std::string> seen;
  const std::vector<std::string> no_names;
  for (const Clause& c : aligned) {
    // Group literals by interval.
    std::vector<std::pair<TimeInterval, std::vector<const Lit*>>> groups;
    for (const Lit& l : c) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g2) { return g2.first == l.iv; });
      if (it == groups.end()) {
        groups.push_back({l.iv, {&l}});
      } else {
        it->second.push_back(&l);
      }
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.first.starts_before(b.first); });

    bool contradictory = false;
    PartitionedClause pc;
    TimeInterval cursor{0.0, 0.0, true, false};  // everything before `cursor.hi` is covered
    bool cursor_closed = false;                   // whether cursor.hi itself is covered
    for (const auto& [iv, lits] : groups) {
      const TimeInterval gap{cursor.hi, iv.lo, !cursor_closed, !iv.lo_closed};
      if (!gap.empty()) pc.conjuncts.push_back({mk_true(), gap});
      if (iv.is_point()) {
        std::vector<Stl> parts;
        for (const Lit* l : lits) parts.push_back(point_constraint(*l));
        if (!satisfiable(mk_and(std::move(parts)))) contradictory = true;
      }
      std::vector<std::pair<std::string, Stl>> forms;
      for (const Lit* l : lits) {
        Stl lf = literal_formula(*l);
        forms.emplace_back(to_string(lf, no_names), lf);
      }
      std::sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      forms.erase(std::unique(forms.begin(), forms.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  forms.end());
      std::vector<Stl> parts;
      for (auto& fp : forms) parts.push_back(fp.second);
      pc.conjuncts.push_back({mk_and(std::move(parts)), iv});
      cursor.hi = iv.hi;
      cursor_closed = iv.hi_closed;
    }
    if (contradictory) continue;
    if (pc.conjuncts.empty()) pc.conjuncts.push_back({mk_true(), TimeInterval::point(0.0)});
    std::string key;
    for (const auto& k : pc.conjuncts) key += k.interval.to_string() + ":" + to_string(k.formula, no_names) + ";";
    if (!seen.insert(key).second) continue;
    out.push_back(std::move(pc));
  }
  if (out.empty()) {
    // Unsatisfiable formula: a single clause that can never be met.
    out.push_back({{{mk_false(), TimeInterval::point(0.0)}}});
  }
  return out;
}

}  // namespace stlta
