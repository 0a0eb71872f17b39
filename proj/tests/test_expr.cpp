#include "doctest.h"

#include <cmath>

#include "tractorlab/expr.hpp"
#include "tractorlab/linalg.hpp"

using namespace tractorlab;

namespace {

ChartPtr chart3() {
  return std::make_shared<Chart>(std::vector<std::string>{"x1", "x2", "x3"});
}

int leaf_count(const Expr& e) {
  if (e.node().kids.empty()) return 1;
  int c = e.kind() == NodeKind::Pow ? 1 : 0;  // the integer exponent counts
  for (const auto& k : e.node().kids) c += leaf_count(k);
  return c;
}

double eval(const Expr& e, std::vector<double> p, const Bindings& b = {}) {
  return e.evaluate(Point{std::move(p)}, b);
}

}  // namespace

TEST_CASE("parse basic polynomial") {
  auto ch = chart3();
  Expr e = parse_expr("x1^2 + 2*x1*x2", ch);
  CHECK(leaf_count(e) == 5);
  CHECK(eval(e, {3, 4, 0}) == doctest::Approx(9 + 24));
}

TEST_CASE("parse opaque function inside exp") {
  auto ch = std::make_shared<Chart>(std::vector<std::string>{"y1", "z1"});
  Expr e = parse_expr("exp(2*s(y1,z1))", ch);
  CHECK(e.kind() == NodeKind::Exp);
  Bindings b;
  b.set("s", [](const std::vector<double>& a, const std::vector<int>& d) {
    CHECK(d == std::vector<int>{0, 0});
    return a[0] + a[1];
  });
  CHECK(e.evaluate(Point{{0.5, 0.25}}, b) == doctest::Approx(std::exp(1.5)));
}

TEST_CASE("syntax error carries the offset") {
  auto ch = chart3();
  CHECK_THROWS_AS(parse_expr("x1 +* x2", ch), ParseError);
  try {
    parse_expr("x1 +* x2", ch);
  } catch (const ParseError& pe) {
    CHECK(pe.offset() == 4);
  }
}

TEST_CASE("unknown symbol names the offender") {
  auto ch = chart3();
  CHECK_THROWS_WITH_AS(parse_expr("x1 + bogus", ch),
                       doctest::Contains("bogus"), ParseError);
}

TEST_CASE("power rule") {
  auto ch = chart3();
  Expr d = simplify(differentiate(parse_expr("x1^2", ch), 0));
  CHECK(identical(d, simplify(parse_expr("2*x1", ch))));
}

TEST_CASE("opaque derivative w.r.t. undeclared coordinate is structural zero") {
  auto ch = std::make_shared<Chart>(std::vector<std::string>{"x1", "y1", "z1"});
  Expr g = parse_expr("g11(y1,z1)", ch);
  CHECK(simplify(differentiate(g, "x1")).is_zero());
  Expr dz = differentiate(g, "z1");
  CHECK(dz.kind() == NodeKind::Opaque);
  CHECK(dz.node().deriv == std::vector<int>{0, 1});
}

TEST_CASE("product and power rule together") {
  auto ch = std::make_shared<Chart>(std::vector<std::string>{"x1", "y1"});
  Expr d = simplify(differentiate(parse_expr("x1*y1^3", ch), "y1"));
  CHECK(identical(d, simplify(parse_expr("3*x1*y1^2", ch))));
}

TEST_CASE("evaluation basics") {
  auto ch = chart3();
  CHECK(eval(parse_expr("2*x1 + x2", ch), {1, 3, 0}) == doctest::Approx(5));
  CHECK(eval(parse_expr("exp(0)", ch), {0, 0, 0}) == doctest::Approx(1));
  CHECK_THROWS_AS(eval(parse_expr("1/x1", ch), {0, 1, 1}), EvalError);
}

TEST_CASE("missing opaque binding is an error") {
  auto ch = chart3();
  CHECK_THROWS_WITH_AS(eval(parse_expr("f(x1)", ch), {1, 0, 0}),
                       doctest::Contains("f"), EvalError);
}

TEST_CASE("simplify is idempotent on random trees") {
  auto ch = chart3();
  PointSampler s(ch, 7);
  const char* pool[] = {
      "x1^2 + 2*x1*x2 - x1^2 + 0*x3",
      "(x1 + x2)*(x1 - x2) + x3/x1",
      "exp(x1)*exp(x1)*x2 - -x3",
      "x1*x2/(x3*x1) + (x1/x3)^2",
      "1/2*x1 + 0.5*x1",
      "-(x1 - x2) + (x2 - x1)^3",
  };
  for (const char* src : pool) {
    Expr e = parse_expr(src, ch);
    Expr s1 = simplify(e);
    Expr s2 = simplify(s1);
    CAPTURE(src);
    CAPTURE(s1.str());
    CHECK(identical(s1, s2));
    for (int rep = 0; rep < 5; ++rep) {
      Point p = s.next();
      double a = e.evaluate(p);
      double b = s1.evaluate(p);
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
  }
}

TEST_CASE("derivative agrees with central finite differences") {
  auto ch = chart3();
  const char* pool[] = {
      "x1^3*x2 + exp(x1*x3)",
      "(x1 + x2^2)/(2 + x3^2)",
      "exp(2*x1) - x2*x3*x1",
  };
  PointSampler s(ch, 11);
  for (const char* src : pool) {
    Expr e = parse_expr(src, ch);
    for (int c = 0; c < 3; ++c) {
      Expr d = simplify(differentiate(e, c));
      for (int rep = 0; rep < 4; ++rep) {
        Point p = s.next();
        double h = 1e-6;
        Point pl = p, pr = p;
        pl.x[size_t(c)] -= h;
        pr.x[size_t(c)] += h;
        double fd = (e.evaluate(pr) - e.evaluate(pl)) / (2 * h);
        double ex = d.evaluate(p);
        CHECK(ex == doctest::Approx(fd).epsilon(1e-6).scale(1.0 + std::abs(ex)));
      }
    }
  }
}

TEST_CASE("differentiate is linear at random points") {
  auto ch = chart3();
  Expr e1 = parse_expr("x1^2*x3", ch);
  Expr e2 = parse_expr("exp(x2)*x1", ch);
  Expr combo = parse_expr("3*x1^2*x3 - 2*exp(x2)*x1", ch);
  Expr lhs = simplify(differentiate(combo, 0));
  Expr rhs = simplify(Expr::constant(ch, Rational(3)) * differentiate(e1, 0) -
                      Expr::constant(ch, Rational(2)) * differentiate(e2, 0));
  PointSampler s(ch, 3);
  for (int i = 0; i < 8; ++i) {
    Point p = s.next();
    CHECK(lhs.evaluate(p) == doctest::Approx(rhs.evaluate(p)).epsilon(1e-12));
  }
}

TEST_CASE("mixed partials commute") {
  auto ch = chart3();
  Expr e = parse_expr("x1^3*x2^2 + exp(x1*x2)*x3", ch);
  Expr ab = simplify(differentiate(differentiate(e, 0), 1));
  Expr ba = simplify(differentiate(differentiate(e, 1), 0));
  PointSampler s(ch, 5);
  for (int i = 0; i < 8; ++i) {
    Point p = s.next();
    CHECK(ab.evaluate(p) == doctest::Approx(ba.evaluate(p)).epsilon(1e-10));
  }
}

TEST_CASE("print then parse round-trips by value") {
  auto ch = chart3();
  const char* pool[] = {
      "x1^2 + 2*x1*x2 - 7",
      "(x1 + x2)/(1 + x3^2)",
      "exp(x1 - x2)*x3^3",
  };
  PointSampler s(ch, 13);
  for (const char* src : pool) {
    Expr e = simplify(parse_expr(src, ch));
    Expr back = parse_expr(e.str(), ch);
    for (int i = 0; i < 6; ++i) {
      Point p = s.next();
      CHECK(e.evaluate(p) == doctest::Approx(back.evaluate(p)).epsilon(1e-12));
    }
  }
}
