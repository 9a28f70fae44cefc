#include "corner/densexpr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace corner {

namespace {

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::number;
  e->value = v;
  return e;
}

ExprPtr make_variable(int axis) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::variable;
  e->var = axis;
  return e;
}

ExprPtr make_negate(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::negate;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr make_binary(char op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::binary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr make_call(std::string fn, ExprPtr arg) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::call;
  e->fn = std::move(fn);
  e->lhs = std::move(arg);
  return e;
}

struct Parser {
  const std::string& src;
  std::size_t pos = 0;

  explicit Parser(const std::string& s) : src(s) {}

  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool peek(char c) {
    skip_space();
    return pos < src.size() && src[pos] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(pos), pos);
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    while (true) {
      if (accept('+'))
        e = make_binary('+', e, parse_product());
      else if (accept('-'))
        e = make_binary('-', e, parse_product());
      else
        return e;
    }
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    while (true) {
      if (accept('*'))
        e = make_binary('*', e, parse_unary());
      else if (accept('/'))
        e = make_binary('/', e, parse_unary());
      else
        return e;
    }
  }

  ExprPtr parse_unary() {
    if (accept('-')) return make_negate(parse_unary());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (accept('^')) return make_binary('^', base, parse_unary());
    return base;
  }

  ExprPtr parse_primary() {
    skip_space();
    if (pos >= src.size())
      throw ParseError("unexpected end of expression at offset " + std::to_string(pos), pos);
    const char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_sum();
      expect(')');
      return e;
    }
    throw ParseError(std::string("unexpected character '") + c + "' at offset " +
                         std::to_string(pos),
                     pos);
  }

  ExprPtr parse_number() {
    const std::size_t start = pos;
    std::size_t consumed = 0;
    double v;
    try {
      v = std::stod(src.substr(start), &consumed);
    } catch (const std::exception&) {
      throw ParseError("malformed number at offset " + std::to_string(start), start);
    }
    pos = start + consumed;
    return make_number(v);
  }

  ExprPtr parse_identifier() {
    const std::size_t start = pos;
    while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name = src.substr(start, pos - start);
    if (name == "x") return make_variable(0);
    if (name == "y") return make_variable(1);
    if (name == "z") return make_variable(2);
    if (name == "pi") return make_number(std::numbers::pi);
    if (name == "exp" || name == "sin" || name == "cos" || name == "sqrt" || name == "abs") {
      expect('(');
      ExprPtr arg = parse_sum();
      expect(')');
      return make_call(name, arg);
    }
    throw ParseError("unknown identifier '" + name + "' at offset " + std::to_string(start),
                     start);
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& src) {
  Parser p(src);
  ExprPtr e = p.parse_sum();
  p.skip_space();
  if (p.pos != src.size())
    throw ParseError("trailing input at offset " + std::to_string(p.pos), p.pos);
  return e;
}

std::string print_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      return buf;
    }
    case Expr::Kind::variable:
      return e->var == 0 ? "x" : e->var == 1 ? "y" : "z";
    case Expr::Kind::negate:
      return "(-" + print_expr(e->lhs) + ")";
    case Expr::Kind::binary:
      return "(" + print_expr(e->lhs) + e->op + print_expr(e->rhs) + ")";
    case Expr::Kind::call:
      return e->fn + "(" + print_expr(e->lhs) + ")";
  }
  return "";
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::number:
      return a->value == b->value;
    case Expr::Kind::variable:
      return a->var == b->var;
    case Expr::Kind::negate:
      return expr_equal(a->lhs, b->lhs);
    case Expr::Kind::binary:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    case Expr::Kind::call:
      return a->fn == b->fn && expr_equal(a->lhs, b->lhs);
  }
  return false;
}

int max_variable(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::number:
      return -1;
    case Expr::Kind::variable:
      return e->var;
    case Expr::Kind::negate:
    case Expr::Kind::call:
      return max_variable(e->lhs);
    case Expr::Kind::binary:
      return std::max(max_variable(e->lhs), max_variable(e->rhs));
  }
  return -1;
}

namespace {

double eval_node(const Expr& e, const std::array<double, 3>& x) {
  switch (e.kind) {
    case Expr::Kind::number:
      return e.value;
    case Expr::Kind::variable:
      return x[e.var];
    case Expr::Kind::negate:
      return -eval_node(*e.lhs, x);
    case Expr::Kind::binary: {
      const double a = eval_node(*e.lhs, x);
      const double b = eval_node(*e.rhs, x);
      switch (e.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      return 0.0;
    }
    case Expr::Kind::call: {
      const double a = eval_node(*e.lhs, x);
      if (e.fn == "exp") return std::exp(a);
      if (e.fn == "sin") return std::sin(a);
      if (e.fn == "cos") return std::cos(a);
      if (e.fn == "sqrt") return std::sqrt(a);
      return std::abs(a);
    }
  }
  return 0.0;
}

}  // namespace

double eval_expr(const ExprPtr& e, const std::array<double, 3>& x, int m) {
  if (max_variable(e) >= m)
    throw DomainError("expression uses a coordinate beyond the domain dimension");
  const double v = eval_node(*e, x);
  if (!std::isfinite(v))
    throw EvalError("expression evaluates to a non-finite value at (" + std::to_string(x[0]) +
                    ", " + std::to_string(x[1]) + ", " + std::to_string(x[2]) + ")");
  return v;
}

ScalarField sample(const ExprPtr& e, const Grid& grid) {
  ScalarField f(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) f.values[k] = eval_expr(e, grid.point(k), grid.m());
  return f;
}

ScalarField sample_positive(const ExprPtr& e, const Grid& grid) {
  ScalarField f = sample(e, grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!(f.values[k] > 0.0)) {
      const auto x = grid.point(k);
      throw PositivityError("expression is not positive at node (" + std::to_string(x[0]) + ", " +
                            std::to_string(x[1]) + ", " + std::to_string(x[2]) + ")");
    }
  return f;
}

}  // namespace corner
