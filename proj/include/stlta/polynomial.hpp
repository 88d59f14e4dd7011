#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stlta {

/// Closed real interval used for interval-arithmetic bounds.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

Range operator+(Range a, Range b);
Range operator*(Range a, Range b);
Range operator*(double s, Range a);
Range ipow(Range a, int e);

/// Thrown by the polynomial expression parser.
class PolynomialParseError : public std::runtime_error {
 public:
  PolynomialParseError(std::size_t pos, const std::string& msg);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// One monomial: coefficient times the product of x_i^exponents[i].
struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

/// Sparse multivariate polynomial over a fixed number of state variables.
/// Terms are kept in a canonical order (graded lexicographic, merged,
/// zero coefficients dropped) so structurally equal polynomials compare equal.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t arity) : arity_(arity) {}

  static Polynomial constant(std::size_t arity, double c);
  static Polynomial variable(std::size_t arity, std::size_t index);

  /// Parses an expression such as "2 - (x - 5)^2 - (y - 5)^2".
  /// Supports + - * ^ (non-negative integer exponents), parentheses,
  /// decimal literals and the given variable names.
  static Polynomial parse(std::string_view text, std::span<const std::string> variables);

  std::size_t arity() const { return arity_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool is_linear() const { return degree() <= 1; }

  /// Indices of variables with a nonzero exponent in some term.
  std::vector<std::size_t> support() const;

  double operator()(std::span<const double> x) const;

  /// Partial derivative with respect to variable `index`.
  Polynomial derivative(std::size_t index) const;

  /// Natural interval extension: sound but possibly loose enclosure.
  Range natural_range(std::span<const Range> box) const;

  /// Enclosure of the range over `box`, intersecting the natural extension
  /// with the mean-value form around the box center.
  Range range(std::span<const Range> box) const;

  std::string to_string(std::span<const std::string> variables) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial pow(int e) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void normalize();

  std::size_t arity_ = 0;
  std::vector<Monomial> terms_;
};

}  // namespace stlta
