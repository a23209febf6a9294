#include "confinv/expression.hpp"

#include <cctype>
#include <cstdlib>

namespace confinv {

Expr Expr::constant(double c) {
  auto n = make(Kind::Const);
  n->cval = c;
  return Expr(P(n));
}

Expr Expr::var(int index) {
  auto n = make(Kind::Var);
  n->var = index;
  return Expr(P(n));
}

Expr Expr::binary(Kind k, const Expr& a, const Expr& b) {
  auto n = make(k);
  n->a = a.node_;
  n->b = b.node_;
  return Expr(P(n));
}

Expr Expr::unary(Kind k, const Expr& a) {
  auto n = make(k);
  n->a = a.node_;
  return Expr(P(n));
}

Expr Expr::call(F1 fn, const Expr& a) {
  auto n = make(Kind::Fn1);
  n->fn = fn;
  n->a = a.node_;
  return Expr(P(n));
}

Expr sin(const Expr& a) { return Expr::call(Expr::F1::Sin, a); }
Expr cos(const Expr& a) { return Expr::call(Expr::F1::Cos, a); }
Expr tan(const Expr& a) { return Expr::call(Expr::F1::Tan, a); }
Expr exp(const Expr& a) { return Expr::call(Expr::F1::Exp, a); }
Expr log(const Expr& a) { return Expr::call(Expr::F1::Log, a); }
Expr sqrt(const Expr& a) { return Expr::call(Expr::F1::Sqrt, a); }
Expr atan(const Expr& a) { return Expr::call(Expr::F1::Atan, a); }

namespace {

class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : s_(text), vars_(vars) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw InputError("unexpected trailing input at position " + std::to_string(pos_) +
                       " in expression: " + s_);
    return e;
  }

private:
  Expr expr() {
    Expr e = term();
    for (;;) {
      skip_ws();
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }

  Expr unary() {
    skip_ws();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip_ws();
    if (accept('^')) return Expr::pow(base, unary()); // right-assoc
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw InputError("unexpected end of expression: " + s_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    throw InputError(std::string("unexpected character '") + c + "' at position " +
                     std::to_string(pos_) + " in expression: " + s_);
  }

  Expr number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) throw InputError("malformed number in expression: " + s_);
    pos_ += size_t(end - start);
    return Expr::constant(v);
  }

  Expr ident() {
    size_t b = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(b, pos_ - b);
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::vector<Expr> args;
      args.push_back(expr());
      skip_ws();
      while (accept(',')) args.push_back(expr());
      expect(')');
      return apply(name, args);
    }
    if (name == "pi") return Expr::constant(3.14159265358979323846264338327950288);
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return Expr::var(int(i));
    throw InputError("unknown identifier '" + name + "' in expression: " + s_);
  }

  Expr apply(const std::string& name, const std::vector<Expr>& args) {
    if (name == "pow") {
      if (args.size() != 2) throw InputError("pow() takes two arguments");
      return Expr::pow(args[0], args[1]);
    }
    if (args.size() != 1) throw InputError(name + "() takes one argument");
    if (name == "sin") return sin(args[0]);
    if (name == "cos") return cos(args[0]);
    if (name == "tan") return tan(args[0]);
    if (name == "exp") return exp(args[0]);
    if (name == "log") return log(args[0]);
    if (name == "sqrt") return sqrt(args[0]);
    if (name == "atan") return atan(args[0]);
    throw InputError("unknown function '" + name + "' in expression: " + s_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw InputError(std::string("expected '") + c + "' at position " +
                       std::to_string(pos_) + " in expression: " + s_);
  }

  const std::string& s_;
  std::vector<std::string> vars_;
  size_t pos_ = 0;
};

} // namespace

Expr parse_expression(const std::string& text, const std::vector<std::string>& var_names) {
  return Parser(text, var_names).run();
}

} // namespace confinv
