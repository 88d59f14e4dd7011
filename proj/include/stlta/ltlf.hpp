#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stlta/formula.hpp"

namespace stlta {

enum class LtlKind { True, False, Atom, Not, And, Or, Next, WeakNext, Until, Release, Eventually, Globally };

struct LtlNode;
using Ltl = std::shared_ptr<const LtlNode>;

struct LtlNode {
  LtlKind kind = LtlKind::True;
  std::size_t atom = 0;
  std::vector<Ltl> children;
};

Ltl ltl_true();
Ltl ltl_false();
Ltl ltl_atom(std::size_t i);
Ltl ltl_not(Ltl a);
Ltl ltl_and(Ltl a, Ltl b);
Ltl ltl_or(Ltl a, Ltl b);
Ltl ltl_next(Ltl a);
Ltl ltl_weak_next(Ltl a);
Ltl ltl_until(Ltl a, Ltl b);
Ltl ltl_release(Ltl a, Ltl b);
Ltl ltl_eventually(Ltl a);
Ltl ltl_globally(Ltl a);

std::string to_string(const Ltl& f, std::span<const std::string> atom_names);

/// Sorted atom indices occurring in f.
std::vector<std::size_t> atoms_of(const Ltl& f);

class NotAlignedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Erases the time windows of a conjunct whose temporal operators all carry
/// `interval`.  phi S_I phi' becomes phi U (phi & phi'): the witness instant
/// must also satisfy phi.
Ltl strip_time(const Stl& conjunct, const TimeInterval& interval);

/// Direct recursive evaluation on a finite word.  On the empty word atoms and
/// strong operators (X, U, F) are false, weak ones (N, R, G) true, and
/// negation complements, so L(!psi) is always the complement of L(psi).
bool ltlf_eval(std::span<const Label> word, const Ltl& psi);

/// Transition guard: a Boolean function over the predicates in `support`,
/// stored as a truth table indexed by the local letter (bit j = support[j]).
struct Guard {
  std::vector<std::size_t> support;
  std::vector<bool> table;

  static Guard always(std::vector<std::size_t> support);
  bool operator()(Label full) const;
  bool is_true() const;
  bool is_false() const;
  /// Minimal-ish sum of products, e.g. "!g1 & !g2" or "true".
  std::string to_string(std::span<const std::string> names) const;
};

/// Local letter of `full` restricted to `support`.
std::size_t local_letter(Label full, std::span<const std::size_t> support);

inline constexpr std::size_t kNoState = std::numeric_limits<std::size_t>::max();

/// Deterministic automaton over the letters of its support predicates.
/// Missing transitions go to an implicit rejecting sink.
struct Dfa {
  std::vector<std::size_t> support;
  std::size_t initial = 0;
  std::vector<bool> accepting;
  std::vector<std::vector<std::size_t>> delta;  // [state][local letter]

  std::size_t size() const { return accepting.size(); }
  std::size_t letters() const { return std::size_t{1} << support.size(); }
  std::size_t step(std::size_t q, Label full) const;
  bool accepts(std::span<const Label> word) const;
  /// Guard of the edge q -> r (possibly false).
  Guard guard(std::size_t q, std::size_t r) const;
};

/// Minimal DFA (dead states removed) recognizing the finite words that
/// satisfy psi.
Dfa ltlf_to_dfa(const Ltl& psi);

/// Hopcroft minimization followed by removal of states that cannot reach
/// acceptance.  The initial state is always kept.
Dfa minimize(const Dfa& d);

/// Are the two trimmed DFAs identical up to state renaming?
bool isomorphic(const Dfa& a, const Dfa& b);

}  // namespace stlta
