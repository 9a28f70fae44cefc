#include <cmath>
#include <numbers>

#include "corner/densexpr.hpp"
#include "doctest.h"

using namespace corner;

TEST_CASE("parsing basics") {
  const ExprPtr e = parse_expr("0.5 + x");
  CHECK(e->kind == Expr::Kind::binary);
  CHECK(e->op == '+');
  CHECK(e->lhs->kind == Expr::Kind::number);
  CHECK(e->rhs->kind == Expr::Kind::variable);

  CHECK_NOTHROW(parse_expr("1 + 0.3*sin(pi*x)*sin(pi*y)"));

  try {
    parse_expr("2 *");
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.offset == 3);
  }
  CHECK_THROWS_AS(parse_expr("foo(1)"), ParseError);
  CHECK_THROWS_AS(parse_expr("1 + (2"), ParseError);
  CHECK_THROWS_AS(parse_expr("1 2"), ParseError);
}

TEST_CASE("evaluation table") {
  const std::array<double, 3> origin{0, 0, 0};
  struct Case {
    const char* src;
    std::array<double, 3> at;
    double expect;
  };
  const Case cases[] = {
      {"0.5 + x", {1, 0, 0}, 1.5},
      {"2^3^2", {0, 0, 0}, 512.0},
      {"-x^2", {3, 0, 0}, -9.0},
      {"2^-2", {0, 0, 0}, 0.25},
      {"1 - 2 - 3", {0, 0, 0}, -4.0},
      {"12/4/3", {0, 0, 0}, 1.0},
      {"2*3 + 4*5", {0, 0, 0}, 26.0},
      {"-2*3", {0, 0, 0}, -6.0},
      {"(1+2)*(3+4)", {0, 0, 0}, 21.0},
      {"pi", {0, 0, 0}, std::numbers::pi},
      {"sin(pi/2)", {0, 0, 0}, 1.0},
      {"cos(0)", {0, 0, 0}, 1.0},
      {"exp(1)", {0, 0, 0}, std::exp(1.0)},
      {"sqrt(16)", {0, 0, 0}, 4.0},
      {"abs(-3.5)", {0, 0, 0}, 3.5},
      {"x*y + z", {2, 3, 4}, 10.0},
      {"1 + 0.3*sin(pi*x)*sin(pi*y)", {0.5, 0.5, 0}, 1.3},
      {"x^0.5", {9, 0, 0}, 3.0},
      {"10 - 2^3", {0, 0, 0}, 2.0},
      {"-(x - y)", {1, 5, 0}, 4.0},
  };
  for (const auto& c : cases)
    CHECK(eval_expr(parse_expr(c.src), c.at, 3) == doctest::Approx(c.expect).epsilon(1e-12));
  CHECK_THROWS_AS(eval_expr(parse_expr("1/x"), origin, 1), EvalError);
}

TEST_CASE("print and reparse is stable") {
  const char* corpus[] = {
      "0.5 + x", "1 + 0.3*sin(pi*x)*sin(pi*y)", "2^3^2", "-x^2", "x*y*z",
      "x/y", "x - y - z", "exp(-x^2)", "sqrt(abs(x - 0.5))", "cos(2*pi*x)",
      "1", "pi*pi", "x + (y + z)", "(x + y)*z", "-(x + 1)",
      "2^-3", "0.1*x + 0.2*y + 0.3*z", "sin(cos(x))", "x^2 + y^2", "1/(1 + x^2)",
      "abs(x)", "exp(x + y)", "x*2", "3.25e-2*x", "x - -y",
      "sin(pi*(x - 0.5))", "sqrt(x*y)", "1 - x", "x^(1/3)", "y",
      "z", "0.0", "42", "x*x*x", "cos(x)^2 + sin(x)^2",
      "2*pi", "x/2/3", "(x)", "((x + y))", "1e3 - 1e2",
      "x^2*y^3", "exp(sin(x))", "abs(x - y)", "sqrt(2)", "pi/4",
      "0.5*(x + y)", "x + 0.001", "1/(x + 2)", "sin(x)*cos(y)*sin(z)", "x - 0.5",
  };
  for (const char* src : corpus) {
    const ExprPtr a = parse_expr(src);
    const ExprPtr b = parse_expr(print_expr(a));
    CHECK(expr_equal(a, b));
  }
}

TEST_CASE("sampling") {
  const Grid g = make_grid(Domain::cube(1), {9});
  const ScalarField one = sample_positive(parse_expr("1"), g);
  for (double v : one.values) CHECK(v == 1.0);

  CHECK_THROWS_AS(sample_positive(parse_expr("x - 0.5"), g), PositivityError);
  CHECK_THROWS_AS(sample(parse_expr("y"), g), DomainError);

  const ScalarField tilt = sample_positive(parse_expr("0.5 + x"), g);
  CHECK(tilt.values[8] == doctest::Approx(1.5));
}
