#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "confinv/error.hpp"
#include "confinv/jet.hpp"

namespace confinv {

// Immutable expression DAG. Subtrees are shared (shared_ptr), so composed
// expressions (Mobius images, conformal factors) stay compact; evaluation
// memoizes per node.
class Expr {
public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Fn1 };
  enum class F1 { Sin, Cos, Tan, Exp, Log, Sqrt, Atan };

  struct Node {
    Kind kind;
    double cval = 0.0;
    int var = -1;
    F1 fn = F1::Sin;
    std::shared_ptr<const Node> a, b;
  };

  Expr() : node_(make(Kind::Const)) {}

  static Expr constant(double c);
  static Expr var(int index);

  bool is_constant() const { return node_->kind == Kind::Const; }
  bool is_zero() const { return is_constant() && node_->cval == 0.0; }
  double constant_value() const { return node_->cval; }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Kind::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Kind::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Kind::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Kind::Div, a, b); }
  friend Expr operator-(const Expr& a) { return unary(Kind::Neg, a); }
  friend Expr operator+(const Expr& a, double c) { return a + constant(c); }
  friend Expr operator+(double c, const Expr& a) { return constant(c) + a; }
  friend Expr operator-(const Expr& a, double c) { return a - constant(c); }
  friend Expr operator*(const Expr& a, double c) { return a * constant(c); }
  friend Expr operator*(double c, const Expr& a) { return constant(c) * a; }
  friend Expr operator/(const Expr& a, double c) { return a / constant(c); }

  static Expr pow(const Expr& a, const Expr& b) { return binary(Kind::Pow, a, b); }
  static Expr pow(const Expr& a, double p) { return binary(Kind::Pow, a, constant(p)); }
  static Expr call(F1 fn, const Expr& a);

  // value of the expression; vars[i] binds variable i
  template <class T>
  T eval(const std::vector<T>& vars) const {
    std::unordered_map<const Node*, T> memo;
    return eval_node(node_.get(), vars, memo);
  }

private:
  using P = std::shared_ptr<const Node>;

  explicit Expr(P n) : node_(std::move(n)) {}
  static std::shared_ptr<Node> make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
  }
  static Expr binary(Kind k, const Expr& a, const Expr& b);
  static Expr unary(Kind k, const Expr& a);

  template <class T>
  static T eval_node(const Node* n, const std::vector<T>& vars,
                     std::unordered_map<const Node*, T>& memo);

  P node_;
};

Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
Expr atan(const Expr& a);

// Parses an arithmetic expression over the named variables. Grammar:
// numbers, variables, pi, + - * / ^ (right-assoc), unary minus, parentheses,
// sin cos tan exp log sqrt atan, pow(a, b).
Expr parse_expression(const std::string& text, const std::vector<std::string>& var_names);

namespace detail {

inline double scalar_pow(const double& base, const double& expo) {
  return std::pow(base, expo);
}
inline double scalar_pow_const(const double& base, double p) { return std::pow(base, p); }
inline Jet scalar_pow(const Jet& base, const Jet& expo) {
  if (base.value() <= 0.0)
    throw NumericError("pow with jet exponent needs positive base");
  return exp(expo * log(base));
}
inline Jet scalar_pow_const(const Jet& base, double p) { return pow(base, p); }

inline double apply_fn1(Expr::F1 fn, const double& x) {
  switch (fn) {
    case Expr::F1::Sin: return std::sin(x);
    case Expr::F1::Cos: return std::cos(x);
    case Expr::F1::Tan: return std::tan(x);
    case Expr::F1::Exp: return std::exp(x);
    case Expr::F1::Log:
      if (x <= 0.0) throw NumericError("log of non-positive value");
      return std::log(x);
    case Expr::F1::Sqrt:
      if (x < 0.0) throw NumericError("sqrt of negative value");
      return std::sqrt(x);
    case Expr::F1::Atan: return std::atan(x);
  }
  throw InputError("unknown function");
}

inline Jet apply_fn1(Expr::F1 fn, const Jet& x) {
  switch (fn) {
    case Expr::F1::Sin: return sin(x);
    case Expr::F1::Cos: return cos(x);
    case Expr::F1::Tan: return tan(x);
    case Expr::F1::Exp: return exp(x);
    case Expr::F1::Log: return log(x);
    case Expr::F1::Sqrt: return sqrt(x);
    case Expr::F1::Atan: return atan(x);
  }
  throw InputError("unknown function");
}

} // namespace detail

template <class T>
T Expr::eval_node(const Node* n, const std::vector<T>& vars,
                  std::unordered_map<const Node*, T>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  T r;
  switch (n->kind) {
    case Kind::Const: {
      // promote through an existing operand shape; context must be non-empty
      r = vars.at(0);
      r = r - r;
      r = r + n->cval;
      break;
    }
    case Kind::Var:
      if (n->var < 0 || n->var >= int(vars.size()))
        throw InputError("expression references undefined variable");
      r = vars[size_t(n->var)];
      break;
    case Kind::Add: r = eval_node(n->a.get(), vars, memo) + eval_node(n->b.get(), vars, memo); break;
    case Kind::Sub: r = eval_node(n->a.get(), vars, memo) - eval_node(n->b.get(), vars, memo); break;
    case Kind::Mul: r = eval_node(n->a.get(), vars, memo) * eval_node(n->b.get(), vars, memo); break;
    case Kind::Div: r = eval_node(n->a.get(), vars, memo) / eval_node(n->b.get(), vars, memo); break;
    case Kind::Neg: r = -eval_node(n->a.get(), vars, memo); break;
    case Kind::Pow:
      if (n->b->kind == Kind::Const)
        r = detail::scalar_pow_const(eval_node(n->a.get(), vars, memo), n->b->cval);
      else
        r = detail::scalar_pow(eval_node(n->a.get(), vars, memo),
                               eval_node(n->b.get(), vars, memo));
      break;
    case Kind::Fn1: r = detail::apply_fn1(n->fn, eval_node(n->a.get(), vars, memo)); break;
  }
  memo.emplace(n, r);
  return r;
}

} // namespace confinv
