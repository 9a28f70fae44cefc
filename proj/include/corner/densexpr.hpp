#pragma once

#include <array>
#include <memory>
#include <string>

#include "corner/forms.hpp"

namespace corner {

// Small expression language for density and form-component functions:
// numbers, x/y/z, pi, + - * / ^ with usual precedence (^ right-associative,
// binding tighter than unary minus), and calls exp, sin, cos, sqrt, abs.
struct Expr {
  enum class Kind { number, variable, negate, binary, call };
  Kind kind = Kind::number;
  double value = 0.0;  // number
  int var = 0;         // variable axis (0..2)
  char op = '+';       // binary
  std::string fn;      // call
  std::shared_ptr<const Expr> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr parse_expr(const std::string& src);
std::string print_expr(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
int max_variable(const ExprPtr& e);  // -1 when no variables appear

double eval_expr(const ExprPtr& e, const std::array<double, 3>& x, int m);

ScalarField sample(const ExprPtr& e, const Grid& grid);
ScalarField sample_positive(const ExprPtr& e, const Grid& grid);

}  // namespace corner
