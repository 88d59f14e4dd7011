#include <catch_amalgamated.hpp>

#include <random>

#include "stlta/polynomial.hpp"

using namespace stlta;
using Catch::Approx;

namespace {
const std::vector<std::string> kXY{"x", "y"};
}

TEST_CASE("parse and evaluate") {
  const auto p = Polynomial::parse("2 - (x - 5)^2 - (y - 5)^2", kXY);
  const std::vector<double> c{5, 5}, o{0, 0};
  CHECK(p(c) == Approx(2.0));
  CHECK(p(o) == Approx(-48.0));
  CHECK(p.degree() == 2);
  CHECK_FALSE(p.is_linear());
  CHECK(p.support() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("term order does not matter") {
  const auto a = Polynomial::parse("x*y + 3*x - y^2 + 1", kXY);
  const auto b = Polynomial::parse("1 - y*y + x*3 + y*x", kXY);
  CHECK(a == b);
}

TEST_CASE("support ignores cancelled variables") {
  const auto p = Polynomial::parse("x - 3.5 + y - y", kXY);
  CHECK(p.support() == std::vector<std::size_t>{0});
  CHECK(p.is_linear());
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(Polynomial::parse("x + z", kXY), PolynomialParseError);
  try {
    Polynomial::parse("x + * y", kXY);
    FAIL("expected throw");
  } catch (const PolynomialParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(Polynomial::parse("(x + y", kXY), PolynomialParseError);
  CHECK_THROWS_AS(Polynomial::parse("x^-1", kXY), PolynomialParseError);
}

TEST_CASE("dimension mismatch throws") {
  const auto p = Polynomial::parse("x", kXY);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(p(one), std::invalid_argument);
}

TEST_CASE("derivative") {
  const auto p = Polynomial::parse("x^3*y + 2*y", kXY);
  CHECK(p.derivative(0) == Polynomial::parse("3*x^2*y", kXY));
  CHECK(p.derivative(1) == Polynomial::parse("x^3 + 2", kXY));
}

TEST_CASE("printing round-trips") {
  const auto p = Polynomial::parse("-(x - 10)^2 - y^2 + 2", kXY);
  const auto q = Polynomial::parse(p.to_string(kXY), kXY);
  CHECK(p == q);
}

TEST_CASE("range encloses sampled values") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto p = Polynomial::parse("x^2*y - 3*x*y^2 + y^3 - 2*x + 1", kXY);
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const std::vector<Range> box{{a, b}, {c, d}};
    const Range r = p.range(box);
    const Range n = p.natural_range(box);
    CHECK(r.lo >= n.lo);
    CHECK(r.hi <= n.hi);
    std::uniform_real_distribution<double> ux(a, b), uy(c, d);
    for (int s = 0; s < 50; ++s) {
      const std::vector<double> x{ux(rng), uy(rng)};
      const double v = p(x);
      CHECK(v >= r.lo - 1e-9);
      CHECK(v <= r.hi + 1e-9);
    }
  }
}

TEST_CASE("even powers of straddling ranges are nonnegative") {
  const Range r = ipow(Range{-2.0, 1.0}, 2);
  CHECK(r.lo == 0.0);
  CHECK(r.hi == 4.0);
}
