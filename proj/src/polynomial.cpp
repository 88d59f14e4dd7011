#include "stlta/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace stlta {

Range operator+(Range a, Range b) { return {a.lo + b.lo, a.hi + b.hi}; }

Range operator*(Range a, Range b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Range operator*(double s, Range a) {
  return s >= 0 ? Range{s * a.lo, s * a.hi} : Range{s * a.hi, s * a.lo};
}

Range ipow(Range a, int e) {
  if (e == 0) return {1.0, 1.0};
  if (e % 2 == 1) return {std::pow(a.lo, e), std::pow(a.hi, e)};
  if (a.lo >= 0) return {std::pow(a.lo, e), std::pow(a.hi, e)};
  if (a.hi <= 0) return {std::pow(a.hi, e), std::pow(a.lo, e)};
  return {0.0, std::pow(std::max(-a.lo, a.hi), e)};
}

PolynomialParseError::PolynomialParseError(std::size_t pos, const std::string& msg)
    : std::runtime_error("polynomial parse error at " + std::to_string(pos) + ": " + msg),
      pos_(pos) {}

Polynomial Polynomial::constant(std::size_t arity, double c) {
  Polynomial p(arity);
  p.terms_.push_back({c, std::vector<int>(arity, 0)});
  p.normalize();
  return p;
}

Polynomial Polynomial::variable(std::size_t arity, std::size_t index) {
  Polynomial p(arity);
  Monomial m{1.0, std::vector<int>(arity, 0)};
  m.exponents.at(index) = 1;
  p.terms_.push_back(std::move(m));
  return p;
}

void Polynomial::normalize() {
  auto total = [](const Monomial& m) { return std::accumulate(m.exponents.begin(), m.exponents.end(), 0); };
  std::sort(terms_.begin(), terms_.end(), [&](const Monomial& a, const Monomial& b) {
    const int da = total(a), db = total(b);
    if (da != db) return da > db;
    return a.exponents > b.exponents;
  });
  std::vector<Monomial> merged;
  for (auto& m : terms_) {
    if (!merged.empty() && merged.back().exponents == m.exponents) {
      merged.back().coefficient += m.coefficient;
    } else {
      merged.push_back(std::move(m));
    }
  }
  std::erase_if(merged, [](const Monomial& m) { return m.coefficient == 0.0; });
  terms_ = std::move(merged);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& m : terms_) d = std::max(d, std::accumulate(m.exponents.begin(), m.exponents.end(), 0));
  return d;
}

std::vector<std::size_t> Polynomial::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < arity_; ++i) {
    for (const auto& m : terms_) {
      if (m.exponents[i] != 0) {
        s.push_back(i);
        break;
      }
    }
  }
  return s;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (x.size() != arity_) {
    throw std::invalid_argument("polynomial evaluated with dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(arity_));
  }
  double sum = 0.0;
  for (const auto& m : terms_) {
    double v = m.coefficient;
    for (std::size_t i = 0; i < arity_; ++i) {
      for (int k = 0; k < m.exponents[i]; ++k) v *= x[i];
    }
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t index) const {
  Polynomial d(arity_);
  for (const auto& m : terms_) {
    if (m.exponents[index] == 0) continue;
    Monomial t = m;
    t.coefficient *= m.exponents[index];
    t.exponents[index] -= 1;
    d.terms_.push_back(std::move(t));
  }
  d.normalize();
  return d;
}

Range Polynomial::natural_range(std::span<const Range> box) const {
  Range sum{0.0, 0.0};
  for (const auto& m : terms_) {
    Range v{1.0, 1.0};
    for (std::size_t i = 0; i < arity_; ++i) {
      if (m.exponents[i] != 0) v = v * ipow(box[i], m.exponents[i]);
    }
    sum = sum + m.coefficient * v;
  }
  return sum;
}

Range Polynomial::range(std::span<const Range> box) const {
  const Range natural = natural_range(box);
  if (degree() <= 1) return natural;
  std::vector<double> center(arity_);
  for (std::size_t i = 0; i < arity_; ++i) center[i] = box[i].mid();
  const double fc = (*this)(center);
  Range mv{fc, fc};
  for (std::size_t i = 0; i < arity_; ++i) {
    if (box[i].width() == 0.0) continue;
    const Polynomial di = derivative(i);
    if (di.is_zero()) continue;
    mv = mv + di.natural_range(box) * Range{box[i].lo - center[i], box[i].hi - center[i]};
  }
  return {std::max(natural.lo, mv.lo), std::min(natural.hi, mv.hi)};
}

std::string Polynomial::to_string(std::span<const std::string> variables) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& m : terms_) {
    double c = m.coefficient;
    const bool has_vars = std::any_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e != 0; });
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = std::fabs(c);
    bool need_star = false;
    if (!has_vars || c != 1.0) {
      os << c;
      need_star = true;
    }
    for (std::size_t i = 0; i < arity_; ++i) {
      if (m.exponents[i] == 0) continue;
      if (need_star) os << "*";
      os << variables[i];
      if (m.exponents[i] > 1) os << "^" << m.exponents[i];
      need_star = true;
    }
    first = false;
  }
  return os.str();
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(arity_);
  r.terms_ = terms_;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.normalize();
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& m : r.terms_) m.coefficient = -m.coefficient;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(arity_);
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Monomial m{a.coefficient * b.coefficient, a.exponents};
      for (std::size_t i = 0; i < arity_; ++i) m.exponents[i] += b.exponents[i];
      r.terms_.push_back(std::move(m));
    }
  }
  r.normalize();
  return r;
}

Polynomial Polynomial::pow(int e) const {
  Polynomial r = constant(arity_, 1.0);
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.arity_ != b.arity_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coefficient != b.terms_[i].coefficient ||
        a.terms_[i].exponents != b.terms_[i].exponents) {
      return false;
    }
  }
  return true;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw PolynomialParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+')) {
        p = p + term();
      } else if (accept('-')) {
        p = p - term();
      } else {
        return p;
      }
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (accept('*')) p = p * unary();
    return p;
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      return base.pow(std::stoi(std::string(text_.substr(start, pos_ - start))));
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      try {
        return Polynomial::constant(vars_.size(), std::stod(std::string(text_.substr(start, pos_ - start))));
      } catch (const std::exception&) {
        pos_ = start;
        fail("malformed number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::span<const std::string> variables) {
  return PolyParser(text, variables).parse();
}

}  // namespace stlta
