#include "stlta/ltlf.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace stlta {

namespace {

Ltl make(LtlKind k, std::vector<Ltl> children = {}, std::size_t atom = 0) {
  auto n = std::make_shared<LtlNode>();
  n->kind = k;
  n->children = std::move(children);
  n->atom = atom;
  return n;
}

}  // namespace

Ltl ltl_true() { return make(LtlKind::True); }
Ltl ltl_false() { return make(LtlKind::False); }
Ltl ltl_atom(std::size_t i) { return make(LtlKind::Atom, {}, i); }
Ltl ltl_not(Ltl a) { return make(LtlKind::Not, {std::move(a)}); }
Ltl ltl_and(Ltl a, Ltl b) { return make(LtlKind::And, {std::move(a), std::move(b)}); }
Ltl ltl_or(Ltl a, Ltl b) { return make(LtlKind::Or, {std::move(a), std::move(b)}); }
Ltl ltl_next(Ltl a) { return make(LtlKind::Next, {std::move(a)}); }
Ltl ltl_weak_next(Ltl a) { return make(LtlKind::WeakNext, {std::move(a)}); }
Ltl ltl_until(Ltl a, Ltl b) { return make(LtlKind::Until, {std::move(a), std::move(b)}); }
Ltl ltl_release(Ltl a, Ltl b) { return make(LtlKind::Release, {std::move(a), std::move(b)}); }
Ltl ltl_eventually(Ltl a) { return make(LtlKind::Eventually, {std::move(a)}); }
Ltl ltl_globally(Ltl a) { return make(LtlKind::Globally, {std::move(a)}); }

std::string to_string(const Ltl& f, std::span<const std::string> names) {
  auto c = [&](std::size_t i) { return to_string(f->children[i], names); };
  switch (f->kind) {
    case LtlKind::True:
      return "true";
    case LtlKind::False:
      return "false";
    case LtlKind::Atom:
      return f->atom < names.size() ? names[f->atom] : "p" + std::to_string(f->atom);
    case LtlKind::Not:
      return "!" + c(0);
    case LtlKind::And:
      return "(" + c(0) + " & " + c(1) + ")";
    case LtlKind::Or:
      return "(" + c(0) + " | " + c(1) + ")";
    case LtlKind::Next:
      return "X " + c(0);
    case LtlKind::WeakNext:
      return "N " + c(0);
    case LtlKind::Until:
      return "(" + c(0) + " U " + c(1) + ")";
    case LtlKind::Release:
      return "(" + c(0) + " R " + c(1) + ")";
    case LtlKind::Eventually:
      return "F " + c(0);
    case LtlKind::Globally:
      return "G " + c(0);
  }
  return "?";
}

std::vector<std::size_t> atoms_of(const Ltl& f) {
  std::set<std::size_t> s;
  std::vector<const LtlNode*> stack{f.get()};
  while (!stack.empty()) {
    const LtlNode* n = stack.back();
    stack.pop_back();
    if (n->kind == LtlKind::Atom) s.insert(n->atom);
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return {s.begin(), s.end()};
}

namespace {

Ltl strip(const Stl& f, const TimeInterval& interval) {
  auto check = [&]() {
    if (f->interval != interval) {
      throw NotAlignedError("temporal interval " + f->interval.to_string() + " differs from conjunct interval " +
                            interval.to_string());
    }
  };
  auto prop = [&](const Stl& g) {
    if (has_temporal(g)) throw NotAlignedError("temporal operator nested inside another");
    return strip(g, interval);
  };
  switch (f->kind) {
    case NodeKind::True:
      return ltl_true();
    case NodeKind::Predicate:
      return ltl_atom(f->pred);
    case NodeKind::Not:
      return ltl_not(strip(f->children[0], interval));
    case NodeKind::And:
    case NodeKind::Or: {
      Ltl acc = strip(f->children[0], interval);
      for (std::size_t i = 1; i < f->children.size(); ++i) {
        Ltl c = strip(f->children[i], interval);
        acc = f->kind == NodeKind::And ? ltl_and(acc, c) : ltl_or(acc, c);
      }
      return acc;
    }
    case NodeKind::Eventually:
      check();
      return ltl_eventually(prop(f->children[0]));
    case NodeKind::Globally:
      check();
      return ltl_globally(prop(f->children[0]));
    case NodeKind::Until:
      // Equal to the segment-local form only when the window starts at the
      // evaluation time.
      if (!(interval.lo == 0.0 && interval.lo_closed)) {
        throw NotAlignedError("until with a delayed window must be separated first");
      }
      [[fallthrough]];
    case NodeKind::SegmentUntil: {
      check();
      Ltl a = prop(f->children[0]);
      Ltl b = prop(f->children[1]);
      return ltl_until(a, ltl_and(a, b));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Ltl strip_time(const Stl& conjunct, const TimeInterval& interval) { return strip(conjunct, interval); }

namespace {

bool eval_at(std::span<const Label> w, std::size_t i, const Ltl& f) {
  const std::size_t n = w.size();
  switch (f->kind) {
    case LtlKind::True:
      return true;
    case LtlKind::False:
      return false;
    case LtlKind::Atom:
      return i < n && ((w[i] >> f->atom) & 1u);
    case LtlKind::Not:
      return !eval_at(w, i, f->children[0]);
    case LtlKind::And:
      return eval_at(w, i, f->children[0]) && eval_at(w, i, f->children[1]);
    case LtlKind::Or:
      return eval_at(w, i, f->children[0]) || eval_at(w, i, f->children[1]);
    case LtlKind::Next:
      return i + 1 < n && eval_at(w, i + 1, f->children[0]);
    case LtlKind::WeakNext:
      return i + 1 >= n || eval_at(w, i + 1, f->children[0]);
    case LtlKind::Until:
      for (std::size_t j = i; j < n; ++j) {
        if (eval_at(w, j, f->children[1])) return true;
        if (!eval_at(w, j, f->children[0])) return false;
      }
      return false;
    case LtlKind::Release:
      for (std::size_t j = i; j < n; ++j) {
        if (!eval_at(w, j, f->children[1])) return false;
        if (eval_at(w, j, f->children[0])) return true;
      }
      return true;
    case LtlKind::Eventually:
      for (std::size_t j = i; j < n; ++j) {
        if (eval_at(w, j, f->children[0])) return true;
      }
      return false;
    case LtlKind::Globally:
      for (std::size_t j = i; j < n; ++j) {
        if (!eval_at(w, j, f->children[0])) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

bool ltlf_eval(std::span<const Label> word, const Ltl& psi) { return eval_at(word, 0, psi); }

std::size_t local_letter(Label full, std::span<const std::size_t> support) {
  std::size_t l = 0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if ((full >> support[j]) & 1u) l |= std::size_t{1} << j;
  }
  return l;
}

namespace {

Label full_label(std::size_t local, std::span<const std::size_t> support) {
  Label l = 0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if ((local >> j) & 1u) l |= Label{1} << support[j];
  }
  return l;
}

}  // namespace

Guard Guard::always(std::vector<std::size_t> support) {
  Guard g;
  g.table.assign(std::size_t{1} << support.size(), true);
  g.support = std::move(support);
  return g;
}

bool Guard::operator()(Label full) const { return table[local_letter(full, support)]; }
bool Guard::is_true() const { return std::all_of(table.begin(), table.end(), [](bool b) { return b; }); }
bool Guard::is_false() const { return std::none_of(table.begin(), table.end(), [](bool b) { return b; }); }

std::string Guard::to_string(std::span<const std::string> names) const {
  if (is_true()) return "true";
  if (is_false()) return "false";
  // Quine-McCluskey prime implicants, then a greedy cover.
  struct Cube {
    std::size_t value, dc;
    bool operator<(const Cube& o) const { return std::tie(dc, value) < std::tie(o.dc, o.value); }
  };
  std::set<Cube> level, primes;
  for (std::size_t m = 0; m < table.size(); ++m) {
    if (table[m]) level.insert({m, 0});
  }
  while (!level.empty()) {
    std::set<Cube> next, used;
    for (auto a = level.begin(); a != level.end(); ++a) {
      for (auto b = std::next(a); b != level.end(); ++b) {
        if (a->dc != b->dc) continue;
        const std::size_t diff = a->value ^ b->value;
        if (diff && !(diff & (diff - 1))) {
          next.insert({a->value & ~diff, a->dc | diff});
          used.insert(*a);
          used.insert(*b);
        }
      }
    }
    for (const auto& c : level) {
      if (!used.count(c)) primes.insert(c);
    }
    level = std::move(next);
  }
  std::vector<std::size_t> uncovered;
  for (std::size_t m = 0; m < table.size(); ++m) {
    if (table[m]) uncovered.push_back(m);
  }
  auto covers = [](const Cube& c, std::size_t m) { return (m & ~c.dc) == c.value; };
  std::vector<Cube> chosen;
  while (!uncovered.empty()) {
    const Cube* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& c : primes) {
      const std::size_t n = std::count_if(uncovered.begin(), uncovered.end(), [&](std::size_t m) { return covers(c, m); });
      if (n > best_n) {
        best = &c;
        best_n = n;
      }
    }
    chosen.push_back(*best);
    std::erase_if(uncovered, [&](std::size_t m) { return covers(*best, m); });
  }
  std::sort(chosen.begin(), chosen.end(), [](const Cube& a, const Cube& b) { return a.value < b.value; });
  std::string out;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    std::vector<std::string> lits;
    for (std::size_t j = 0; j < support.size(); ++j) {
      if ((chosen[i].dc >> j) & 1u) continue;
      const std::size_t p = support[j];
      const std::string name = p < names.size() ? names[p] : "p" + std::to_string(p);
      lits.push_back(((chosen[i].value >> j) & 1u) ? name : "!" + name);
    }
    std::string term;
    for (std::size_t k = 0; k < lits.size(); ++k) term += (k ? " & " : "") + lits[k];
    if (chosen.size() > 1 && lits.size() > 1) term = "(" + term + ")";
    out += (i ? " | " : "") + term;
  }
  return out;
}

std::size_t Dfa::step(std::size_t q, Label full) const {
  if (q == kNoState) return kNoState;
  return delta[q][local_letter(full, support)];
}

bool Dfa::accepts(std::span<const Label> word) const {
  std::size_t q = initial;
  for (Label l : word) {
    q = step(q, l);
    if (q == kNoState) return false;
  }
  return accepting[q];
}

Guard Dfa::guard(std::size_t q, std::size_t r) const {
  Guard g;
  g.support = support;
  g.table.resize(letters());
  for (std::size_t l = 0; l < letters(); ++l) g.table[l] = delta[q][l] == r;
  return g;
}

namespace {

Ltl nnf(const Ltl& f, bool neg) {
  const auto& ch = f->children;
  switch (f->kind) {
    case LtlKind::True:
      return neg ? ltl_false() : f;
    case LtlKind::False:
      return neg ? ltl_true() : f;
    case LtlKind::Atom:
      return neg ? ltl_not(f) : f;
    case LtlKind::Not:
      return nnf(ch[0], !neg);
    case LtlKind::And:
      return neg ? ltl_or(nnf(ch[0], true), nnf(ch[1], true)) : ltl_and(nnf(ch[0], false), nnf(ch[1], false));
    case LtlKind::Or:
      return neg ? ltl_and(nnf(ch[0], true), nnf(ch[1], true)) : ltl_or(nnf(ch[0], false), nnf(ch[1], false));
    case LtlKind::Next:
      return neg ? ltl_weak_next(nnf(ch[0], true)) : ltl_next(nnf(ch[0], false));
    case LtlKind::WeakNext:
      return neg ? ltl_next(nnf(ch[0], true)) : ltl_weak_next(nnf(ch[0], false));
    case LtlKind::Until:
      return neg ? ltl_release(nnf(ch[0], true), nnf(ch[1], true)) : ltl_until(nnf(ch[0], false), nnf(ch[1], false));
    case LtlKind::Release:
      return neg ? ltl_until(nnf(ch[0], true), nnf(ch[1], true)) : ltl_release(nnf(ch[0], false), nnf(ch[1], false));
    case LtlKind::Eventually:
      return neg ? ltl_globally(nnf(ch[0], true)) : ltl_eventually(nnf(ch[0], false));
    case LtlKind::Globally:
      return neg ? ltl_eventually(nnf(ch[0], true)) : ltl_globally(nnf(ch[0], false));
  }
  throw std::logic_error("unreachable");
}

// Positive Boolean combination of obligation markers in minimal DNF:
// {} is false, {{}} is true.
using Cube = std::vector<int>;
using Dnf = std::vector<Cube>;

Dnf dnf_true() { return {Cube{}}; }

void minimize_dnf(Dnf& d) {
  for (auto& c : d) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(d.begin(), d.end(), [](const Cube& a, const Cube& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  d.erase(std::unique(d.begin(), d.end()), d.end());
  Dnf out;
  for (const auto& c : d) {
    const bool subsumed = std::any_of(out.begin(), out.end(), [&](const Cube& o) {
      return std::includes(c.begin(), c.end(), o.begin(), o.end());
    });
    if (!subsumed) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  d = std::move(out);
}

Dnf dnf_or(Dnf a, const Dnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  minimize_dnf(a);
  return a;
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Cube c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
    }
  }
  minimize_dnf(out);
  return out;
}

// Formula progression: what the rest of the word must satisfy after one letter.
class Progressor {
 public:
  enum class Mark { Init, Strong, Weak };

  int marker(Mark m, const Ltl& f) {
    const std::string key = std::to_string(static_cast<int>(m)) + to_string(f, {});
    auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(markers_.size()));
    if (inserted) markers_.push_back({m, f});
    return it->second;
  }

  bool marker_accepts_empty(int id) const {
    const auto& [m, f] = markers_[id];
    if (m == Mark::Strong) return false;
    if (m == Mark::Weak) return true;
    return accepts_empty(f);
  }

  Dnf progress_marker(int id, Label letter) {
    const auto key = std::make_pair(id, letter);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Ltl f = markers_[id].second;
    Dnf d = progress(f, letter);
    memo_.emplace(key, d);
    return d;
  }

  static bool accepts_empty(const Ltl& f) {
    switch (f->kind) {
      case LtlKind::True:
      case LtlKind::WeakNext:
      case LtlKind::Release:
      case LtlKind::Globally:
        return true;
      case LtlKind::Not:
        return !accepts_empty(f->children[0]);
      case LtlKind::And:
        return accepts_empty(f->children[0]) && accepts_empty(f->children[1]);
      case LtlKind::Or:
        return accepts_empty(f->children[0]) || accepts_empty(f->children[1]);
      default:
        return false;
    }
  }

 private:
  Dnf progress(const Ltl& f, Label letter) {
    const auto& ch = f->children;
    switch (f->kind) {
      case LtlKind::True:
        return dnf_true();
      case LtlKind::False:
        return {};
      case LtlKind::Atom:
        return ((letter >> f->atom) & 1u) ? dnf_true() : Dnf{};
      case LtlKind::Not:
        return ((letter >> ch[0]->atom) & 1u) ? Dnf{} : dnf_true();
      case LtlKind::And:
        return dnf_and(progress(ch[0], letter), progress(ch[1], letter));
      case LtlKind::Or:
        return dnf_or(progress(ch[0], letter), progress(ch[1], letter));
      case LtlKind::Next:
        return {Cube{marker(Mark::Strong, ch[0])}};
      case LtlKind::WeakNext:
        return {Cube{marker(Mark::Weak, ch[0])}};
      case LtlKind::Until:
        return dnf_or(progress(ch[1], letter), dnf_and(progress(ch[0], letter), {Cube{marker(Mark::Strong, f)}}));
      case LtlKind::Release:
        return dnf_and(progress(ch[1], letter), dnf_or(progress(ch[0], letter), {Cube{marker(Mark::Weak, f)}}));
      case LtlKind::Eventually:
        return dnf_or(progress(ch[0], letter), {Cube{marker(Mark::Strong, f)}});
      case LtlKind::Globally:
        return dnf_and(progress(ch[0], letter), {Cube{marker(Mark::Weak, f)}});
    }
    throw std::logic_error("unreachable");
  }

  std::map<std::string, int> ids_;
  std::vector<std::pair<Mark, Ltl>> markers_;
  std::map<std::pair<int, Label>, Dnf> memo_;
};

}  // namespace

Dfa ltlf_to_dfa(const Ltl& psi) {
  const Ltl f = nnf(psi, false);
  Progressor prog;
  Dfa raw;
  raw.support = atoms_of(f);
  const std::size_t nl = raw.letters();

  std::map<Dnf, std::size_t> index;
  std::vector<Dnf> states;
  auto intern = [&](const Dnf& d) {
    auto [it, inserted] = index.try_emplace(d, states.size());
    if (inserted) states.push_back(d);
    return it->second;
  };
  raw.initial = intern({Cube{prog.marker(Progressor::Mark::Init, f)}});
  for (std::size_t s = 0; s < states.size(); ++s) {
    const Dnf cur = states[s];
    std::vector<std::size_t> row(nl);
    for (std::size_t l = 0; l < nl; ++l) {
      const Label letter = full_label(l, raw.support);
      Dnf next;
      for (const Cube& c : cur) {
        Dnf term = dnf_true();
        for (int m : c) {
          term = dnf_and(term, prog.progress_marker(m, letter));
          if (term.empty()) break;
        }
        next = dnf_or(next, term);
      }
      row[l] = intern(next);
    }
    raw.delta.push_back(std::move(row));
  }
  raw.accepting.resize(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) {
    raw.accepting[s] = std::any_of(states[s].begin(), states[s].end(), [&](const Cube& c) {
      return std::all_of(c.begin(), c.end(), [&](int m) { return prog.marker_accepts_empty(m); });
    });
  }
  return minimize(raw);
}

namespace {

// Renumbers states in breadth-first order from the initial state.
Dfa canonical(const Dfa& d) {
  std::vector<std::size_t> order, id(d.size(), kNoState);
  std::deque<std::size_t> queue{d.initial};
  id[d.initial] = 0;
  order.push_back(d.initial);
  while (!queue.empty()) {
    const std::size_t q = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < d.letters(); ++l) {
      const std::size_t r = d.delta[q][l];
      if (r != kNoState && id[r] == kNoState) {
        id[r] = order.size();
        order.push_back(r);
        queue.push_back(r);
      }
    }
  }
  Dfa out;
  out.support = d.support;
  out.initial = 0;
  for (std::size_t q : order) {
    out.accepting.push_back(d.accepting[q]);
    std::vector<std::size_t> row(d.letters(), kNoState);
    for (std::size_t l = 0; l < d.letters(); ++l) {
      const std::size_t r = d.delta[q][l];
      row[l] = r == kNoState ? kNoState : id[r];
    }
    out.delta.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Dfa minimize(const Dfa& d) {
  const std::size_t nl = d.letters();
  // Complete the automaton with an explicit sink.
  const std::size_t n = d.size() + 1, sink = d.size();
  auto next = [&](std::size_t q, std::size_t l) {
    if (q == sink) return sink;
    const std::size_t r = d.delta[q][l];
    return r == kNoState ? sink : r;
  };
  std::vector<std::vector<std::vector<std::size_t>>> inverse(nl, std::vector<std::vector<std::size_t>>(n));
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t l = 0; l < nl; ++l) inverse[l][next(q, l)].push_back(q);
  }

  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of(n);
  {
    std::vector<std::size_t> acc, rej;
    for (std::size_t q = 0; q < n; ++q) (q != sink && d.accepting[q] ? acc : rej).push_back(q);
    for (auto* b : {&acc, &rej}) {
      if (b->empty()) continue;
      for (std::size_t q : *b) block_of[q] = blocks.size();
      blocks.push_back(*b);
    }
  }
  std::set<std::size_t> work;
  for (std::size_t b = 0; b < blocks.size(); ++b) work.insert(b);
  while (!work.empty()) {
    const std::size_t a = *work.begin();
    work.erase(work.begin());
    const std::vector<std::size_t> splitter = blocks[a];
    for (std::size_t l = 0; l < nl; ++l) {
      std::map<std::size_t, std::vector<std::size_t>> hit;
      for (std::size_t r : splitter) {
        for (std::size_t q : inverse[l][r]) hit[block_of[q]].push_back(q);
      }
      for (auto& [y, inside] : hit) {
        if (inside.size() == blocks[y].size()) continue;
        std::sort(inside.begin(), inside.end());
        inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
        if (inside.size() == blocks[y].size()) continue;
        std::vector<std::size_t> outside;
        std::set_difference(blocks[y].begin(), blocks[y].end(), inside.begin(), inside.end(),
                            std::back_inserter(outside));
        const std::size_t z = blocks.size();
        blocks[y] = inside;
        blocks.push_back(outside);
        for (std::size_t q : outside) block_of[q] = z;
        if (work.count(y)) {
          work.insert(z);
        } else {
          work.insert(blocks[y].size() <= blocks[z].size() ? y : z);
        }
      }
    }
  }

  // Quotient, then drop states that cannot reach acceptance.
  const std::size_t nb = blocks.size();
  std::vector<bool> acc(nb, false);
  std::vector<std::vector<std::size_t>> qd(nb, std::vector<std::size_t>(nl));
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t rep = blocks[b].front();
    acc[b] = rep != sink && d.accepting[rep];
    for (std::size_t l = 0; l < nl; ++l) qd[b][l] = block_of[next(rep, l)];
  }
  std::vector<bool> live(nb, false);
  for (std::size_t b = 0; b < nb; ++b) live[b] = acc[b];
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < nb; ++b) {
      if (live[b]) continue;
      for (std::size_t l = 0; l < nl; ++l) {
        if (live[qd[b][l]]) {
          live[b] = changed = true;
          break;
        }
      }
    }
  }
  Dfa out;
  out.support = d.support;
  const std::size_t init_block = block_of[d.initial];
  std::vector<std::size_t> id(nb, kNoState);
  for (std::size_t b = 0; b < nb; ++b) {
    if (live[b] || b == init_block) {
      id[b] = out.accepting.size();
      out.accepting.push_back(acc[b]);
    }
  }
  out.delta.assign(out.accepting.size(), std::vector<std::size_t>(nl, kNoState));
  for (std::size_t b = 0; b < nb; ++b) {
    if (id[b] == kNoState) continue;
    for (std::size_t l = 0; l < nl; ++l) {
      const std::size_t r = qd[b][l];
      if (live[r]) out.delta[id[b]][l] = id[r];
    }
  }
  out.initial = id[init_block];
  return canonical(out);
}

bool isomorphic(const Dfa& a, const Dfa& b) {
  if (a.support != b.support || a.size() != b.size()) return false;
  const Dfa ca = canonical(a), cb = canonical(b);
  return ca.accepting == cb.accepting && ca.delta == cb.delta;
}

}  // namespace stlta
