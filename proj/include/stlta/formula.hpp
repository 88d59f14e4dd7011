#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stlta/interval.hpp"
#include "stlta/polynomial.hpp"

namespace stlta {

/// Truth assignment over the predicate set, bit i = predicate i.
using Label = std::uint32_t;
inline constexpr std::size_t kMaxPredicates = 32;

struct PredicateFn {
  std::string name;
  Polynomial h;

  std::size_t arity() const { return h.arity(); }
};

/// h(x) >= 0.  Throws std::invalid_argument on a dimension mismatch.
bool eval_predicate(const PredicateFn& p, std::span<const double> x);

/// Label of state x: bit i set iff predicate i holds.
Label label_of(std::span<const PredicateFn> preds, std::span<const double> x);

enum class NodeKind {
  True,
  Predicate,
  Not,
  And,
  Or,
  Until,
  Eventually,
  Globally,
  // phi S_I phi': like Until, but phi is only required from the start of I.
  // Produced by time separation; never needed in hand-written specs.
  SegmentUntil,
};

struct StlNode;
using Stl = std::shared_ptr<const StlNode>;

struct StlNode {
  NodeKind kind = NodeKind::True;
  std::size_t pred = 0;  // Predicate
  TimeInterval interval;  // temporal kinds
  std::vector<Stl> children;
};

bool is_temporal(NodeKind k);
bool has_temporal(const Stl& f);

Stl mk_true();
Stl mk_false();
Stl mk_pred(std::size_t index);
Stl mk_not(Stl a);
/// n-ary; nested And children are flattened, a single child is returned as-is,
/// and an empty list yields true.
Stl mk_and(std::vector<Stl> children);
Stl mk_and(Stl a, Stl b);
/// n-ary; flattened like mk_and, empty yields false.
Stl mk_or(std::vector<Stl> children);
Stl mk_or(Stl a, Stl b);
Stl mk_until(TimeInterval i, Stl lhs, Stl rhs);
Stl mk_segment_until(TimeInterval i, Stl lhs, Stl rhs);
Stl mk_eventually(TimeInterval i, Stl a);
Stl mk_globally(TimeInterval i, Stl a);

bool structurally_equal(const Stl& a, const Stl& b);

/// Is the formula literally `false` (Not True)?
bool is_false(const Stl& f);

/// Largest finite interval endpoint of a temporal operator; 0 if none.
double formula_horizon(const Stl& f);

/// Concrete syntax, re-parseable by parse_stl.
std::string to_string(const Stl& f, std::span<const std::string> pred_names);

class StlParseError : public std::runtime_error {
 public:
  StlParseError(std::size_t pos, const std::string& msg);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class NestedTemporalError : public StlParseError {
 public:
  using StlParseError::StlParseError;
};

class UnknownPredicateError : public StlParseError {
 public:
  using StlParseError::StlParseError;
};

Stl parse_stl(std::string_view text, std::span<const std::string> pred_names);

/// A parsed specification file.
struct StlSpec {
  std::vector<std::string> variables;
  std::vector<PredicateFn> predicates;
  Stl formula;

  std::vector<std::string> predicate_names() const;
};

/// Error in a specification file, with a 1-based line number.
class SpecFileError : public std::runtime_error {
 public:
  SpecFileError(std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the text of a specification file. Without a `variables:` block the
/// variables default to `default_vars` (or x, y when that is empty).
StlSpec parse_spec(std::string_view text, std::span<const std::string> default_vars = {});
StlSpec load_spec(const std::string& path, std::span<const std::string> default_vars = {});

}  // namespace stlta
