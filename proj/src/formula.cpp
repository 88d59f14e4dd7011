#include "stlta/formula.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace stlta {

bool eval_predicate(const PredicateFn& p, std::span<const double> x) { return p.h(x) >= 0.0; }

Label label_of(std::span<const PredicateFn> preds, std::span<const double> x) {
  Label l = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (eval_predicate(preds[i], x)) l |= Label{1} << i;
  }
  return l;
}

bool is_temporal(NodeKind k) {
  return k == NodeKind::Until || k == NodeKind::Eventually || k == NodeKind::Globally ||
         k == NodeKind::SegmentUntil;
}

bool has_temporal(const Stl& f) {
  if (is_temporal(f->kind)) return true;
  return std::any_of(f->children.begin(), f->children.end(), [](const Stl& c) { return has_temporal(c); });
}

namespace {

Stl make(NodeKind k, std::vector<Stl> children = {}, TimeInterval i = {}, std::size_t pred = 0) {
  auto n = std::make_shared<StlNode>();
  n->kind = k;
  n->children = std::move(children);
  n->interval = i;
  n->pred = pred;
  return n;
}

Stl make_nary(NodeKind k, std::vector<Stl> children, Stl empty_value) {
  std::vector<Stl> flat;
  for (auto& c : children) {
    if (c->kind == k) {
      flat.insert(flat.end(), c->children.begin(), c->children.end());
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return empty_value;
  if (flat.size() == 1) return flat.front();
  return make(k, std::move(flat));
}

}  // namespace

Stl mk_true() {
  static const Stl t = make(NodeKind::True);
  return t;
}
Stl mk_false() { return mk_not(mk_true()); }
Stl mk_pred(std::size_t index) { return make(NodeKind::Predicate, {}, {}, index); }
Stl mk_not(Stl a) { return make(NodeKind::Not, {std::move(a)}); }
Stl mk_and(std::vector<Stl> children) { return make_nary(NodeKind::And, std::move(children), mk_true()); }
Stl mk_and(Stl a, Stl b) { return mk_and(std::vector<Stl>{std::move(a), std::move(b)}); }
Stl mk_or(std::vector<Stl> children) { return make_nary(NodeKind::Or, std::move(children), mk_false()); }
Stl mk_or(Stl a, Stl b) { return mk_or(std::vector<Stl>{std::move(a), std::move(b)}); }
Stl mk_until(TimeInterval i, Stl lhs, Stl rhs) {
  return make(NodeKind::Until, {std::move(lhs), std::move(rhs)}, i);
}
Stl mk_segment_until(TimeInterval i, Stl lhs, Stl rhs) {
  return make(NodeKind::SegmentUntil, {std::move(lhs), std::move(rhs)}, i);
}
Stl mk_eventually(TimeInterval i, Stl a) { return make(NodeKind::Eventually, {std::move(a)}, i); }
Stl mk_globally(TimeInterval i, Stl a) { return make(NodeKind::Globally, {std::move(a)}, i); }

bool structurally_equal(const Stl& a, const Stl& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
  if (a->kind == NodeKind::Predicate && a->pred != b->pred) return false;
  if (is_temporal(a->kind) && a->interval != b->interval) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  }
  return true;
}

bool is_false(const Stl& f) {
  return f->kind == NodeKind::Not && f->children[0]->kind == NodeKind::True;
}

double formula_horizon(const Stl& f) {
  double h = 0.0;
  if (is_temporal(f->kind)) h = f->interval.hi;
  for (const auto& c : f->children) h = std::max(h, formula_horizon(c));
  return h;
}

namespace {

// Binding strength used by the printer: higher binds tighter.
constexpr int kPrecOr = 1, kPrecAnd = 2, kPrecUntil = 3, kPrecUnary = 4;

void print(const Stl& f, std::span<const std::string> names, int ctx, std::string& out) {
  auto wrap_open = [&](int prec) {
    if (prec < ctx) out += '(';
  };
  auto wrap_close = [&](int prec) {
    if (prec < ctx) out += ')';
  };
  switch (f->kind) {
    case NodeKind::True:
      out += "true";
      return;
    case NodeKind::Predicate:
      out += f->pred < names.size() ? names[f->pred] : "p" + std::to_string(f->pred);
      return;
    case NodeKind::Not:
      if (is_false(f)) {
        out += "false";
        return;
      }
      out += '!';
      print(f->children[0], names, kPrecUnary, out);
      return;
    case NodeKind::Eventually:
    case NodeKind::Globally:
      out += f->kind == NodeKind::Eventually ? 'F' : 'G';
      out += f->interval.to_string();
      out += '(';
      print(f->children[0], names, 0, out);
      out += ')';
      return;
    case NodeKind::Until:
    case NodeKind::SegmentUntil:
      wrap_open(kPrecUntil);
      print(f->children[0], names, kPrecUnary, out);
      out += f->kind == NodeKind::Until ? " U" : " S";
      out += f->interval.to_string();
      out += ' ';
      print(f->children[1], names, kPrecUnary, out);
      wrap_close(kPrecUntil);
      return;
    case NodeKind::And:
    case NodeKind::Or: {
      const int prec = f->kind == NodeKind::And ? kPrecAnd : kPrecOr;
      wrap_open(prec);
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) out += f->kind == NodeKind::And ? " & " : " | ";
        print(f->children[i], names, prec + 1, out);
      }
      wrap_close(prec);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Stl& f, std::span<const std::string> pred_names) {
  std::string out;
  print(f, pred_names, 0, out);
  return out;
}

StlParseError::StlParseError(std::size_t pos, const std::string& msg)
    : std::runtime_error("at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}

namespace {

class StlParser {
 public:
  StlParser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  Stl parse() {
    Stl f = implies();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw StlParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string_view peek_ident() {
    skip_ws();
    std::size_t e = pos_;
    if (e < text_.size() && ident_start(text_[e])) {
      while (e < text_.size() && ident_char(text_[e])) ++e;
    }
    return text_.substr(pos_, e - pos_);
  }

  // Is there an interval bracket right after the identifier at pos_?
  bool bracket_after(std::string_view ident) const {
    std::size_t p = pos_ + ident.size();
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && (text_[p] == '[' || text_[p] == '(');
  }

  Stl implies() {
    Stl lhs = disjunction();
    if (accept("->")) return mk_or(mk_not(lhs), implies());
    return lhs;
  }

  Stl disjunction() {
    std::vector<Stl> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return mk_or(std::move(parts));
  }

  Stl conjunction() {
    std::vector<Stl> parts{until()};
    while (accept("&")) parts.push_back(until());
    return mk_and(std::move(parts));
  }

  Stl until() {
    Stl lhs = unary();
    const std::string_view id = peek_ident();
    if ((id == "U" || id == "S") && bracket_after(id)) {
      const std::size_t op_pos = pos_;
      pos_ += 1;
      const TimeInterval i = interval();
      Stl rhs = unary();
      if (has_temporal(lhs) || has_temporal(rhs)) {
        throw NestedTemporalError(op_pos, "temporal operator nested inside until");
      }
      return id == "U" ? mk_until(i, lhs, rhs) : mk_segment_until(i, lhs, rhs);
    }
    return lhs;
  }

  Stl unary() {
    if (accept("!")) return mk_not(unary());
    const std::string_view id = peek_ident();
    if ((id == "F" || id == "G") && bracket_after(id)) {
      const std::size_t op_pos = pos_;
      pos_ += 1;
      const TimeInterval i = interval();
      Stl body = unary();
      if (has_temporal(body)) {
        throw NestedTemporalError(op_pos, std::string("temporal operator nested inside ") + id[0]);
      }
      return id == "F" ? mk_eventually(i, body) : mk_globally(i, body);
    }
    return primary();
  }

  Stl primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (accept("(")) {
      Stl f = implies();
      expect(")");
      return f;
    }
    const std::string_view id = peek_ident();
    if (id.empty()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (id == "true") {
      pos_ += id.size();
      return mk_true();
    }
    if (id == "false") {
      pos_ += id.size();
      return mk_false();
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == id) {
        pos_ += id.size();
        return mk_pred(i);
      }
    }
    throw UnknownPredicateError(pos_, "undeclared predicate '" + std::string(id) + "'");
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                                   ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
                                    (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    const std::string s(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      pos_ = start;
      fail("expected a number");
    }
    return v;
  }

  TimeInterval interval() {
    skip_ws();
    const std::size_t start = pos_;
    TimeInterval i;
    if (accept("[")) {
      i.lo_closed = true;
    } else if (accept("(")) {
      i.lo_closed = false;
    } else {
      fail("expected '[' or '('");
    }
    i.lo = number();
    expect(",");
    i.hi = number();
    if (accept("]")) {
      i.hi_closed = true;
    } else if (accept(")")) {
      i.hi_closed = false;
    } else {
      fail("expected ']' or ')'");
    }
    if (i.lo < 0 || i.hi < i.lo || !i.bounded()) {
      pos_ = start;
      fail("interval bounds must satisfy 0 <= a <= b < inf");
    }
    if (i.empty()) {
      pos_ = start;
      fail("empty interval " + i.to_string());
    }
    return i;
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Stl parse_stl(std::string_view text, std::span<const std::string> pred_names) {
  return StlParser(text, pred_names).parse();
}

std::vector<std::string> StlSpec::predicate_names() const {
  std::vector<std::string> n;
  for (const auto& p : predicates) n.push_back(p.name);
  return n;
}

SpecFileError::SpecFileError(std::size_t line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

StlSpec parse_spec(std::string_view text, std::span<const std::string> default_vars) {
  StlSpec spec;
  enum class Section { None, Variables, Predicates, Formula } section = Section::None;
  std::string formula_text;
  std::size_t formula_line = 0;
  std::vector<std::pair<std::size_t, std::string>> pred_lines;
  std::vector<std::pair<std::size_t, std::string>> var_lines;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    auto header = [&](std::string_view key, Section s) {
      if (line.rfind(key, 0) != 0) return false;
      section = s;
      line = trim(std::string_view(line).substr(key.size()));
      return true;
    };
    if (header("variables:", Section::Variables) || header("predicates:", Section::Predicates) ||
        header("formula:", Section::Formula)) {
      if (section == Section::Formula && formula_line == 0) formula_line = lineno;
      if (line.empty()) continue;
    }
    switch (section) {
      case Section::None:
        throw SpecFileError(lineno, "content before any 'variables:', 'predicates:' or 'formula:' block");
      case Section::Variables:
        var_lines.emplace_back(lineno, line);
        break;
      case Section::Predicates:
        pred_lines.emplace_back(lineno, line);
        break;
      case Section::Formula:
        if (formula_line == 0) formula_line = lineno;
        formula_text += line;
        formula_text += ' ';
        break;
    }
  }

  for (const auto& [ln, l] : var_lines) {
    std::string s = l;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream vs(s);
    std::string v;
    while (vs >> v) {
      if (!valid_ident(v)) throw SpecFileError(ln, "invalid variable name '" + v + "'");
      if (std::find(spec.variables.begin(), spec.variables.end(), v) != spec.variables.end()) {
        throw SpecFileError(ln, "duplicate variable '" + v + "'");
      }
      spec.variables.push_back(v);
    }
  }
  if (spec.variables.empty()) {
    if (default_vars.empty()) {
      spec.variables = {"x", "y"};
    } else {
      spec.variables.assign(default_vars.begin(), default_vars.end());
    }
  }

  for (const auto& [ln, l] : pred_lines) {
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw SpecFileError(ln, "expected 'name = polynomial'");
    PredicateFn p;
    p.name = trim(std::string_view(l).substr(0, eq));
    if (!valid_ident(p.name)) throw SpecFileError(ln, "invalid predicate name '" + p.name + "'");
    static const char* kReserved[] = {"true", "false", "F", "G", "U", "S"};
    for (const char* r : kReserved) {
      if (p.name == r) throw SpecFileError(ln, "predicate name '" + p.name + "' is reserved");
    }
    for (const auto& q : spec.predicates) {
      if (q.name == p.name) throw SpecFileError(ln, "duplicate predicate '" + p.name + "'");
    }
    try {
      p.h = Polynomial::parse(std::string_view(l).substr(eq + 1), spec.variables);
    } catch (const PolynomialParseError& e) {
      throw SpecFileError(ln, std::string("predicate '") + p.name + "': " + e.what());
    }
    if (p.h.is_zero()) throw SpecFileError(ln, "predicate '" + p.name + "' is identically zero");
    spec.predicates.push_back(std::move(p));
  }
  if (spec.predicates.size() > kMaxPredicates) {
    throw SpecFileError(lineno, "at most " + std::to_string(kMaxPredicates) + " predicates are supported");
  }
  if (trim(formula_text).empty()) throw SpecFileError(lineno, "missing 'formula:' block");

  const auto names = spec.predicate_names();
  try {
    spec.formula = parse_stl(formula_text, names);
  } catch (const StlParseError& e) {
    throw SpecFileError(formula_line, std::string("formula ") + e.what());
  }
  return spec;
}

StlSpec load_spec(const std::string& path, std::span<const std::string> default_vars) {
  std::ifstream in(path);
  if (!in) throw SpecFileError(0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), default_vars);
}

}  // namespace stlta
