#pragma once

#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "pathwise/error.hpp"

namespace pathwise::expr {

/// Variables an expression may reference.
struct Env {
  double t = 0.0;
  double xi = 0.0;
  double n = 0.0;
};

enum class Var { t, xi, n };

class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Immutable arithmetic expression: + - * / ^, unary minus, the usual
/// elementary functions, constants pi and e, variables t, xi (or the Greek
/// letter) and n.
class Expr {
 public:
  enum class Op { constant, variable, add, sub, mul, div, pow, neg, call };
  enum class Fn { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, asinh, abs };

  Expr() : node_(std::make_shared<Node>(make(Op::constant))) {}

  static Expr constant(double v) { return Expr(std::make_shared<Node>(make(Op::constant, v))); }
  static Expr variable(Var v) {
    Node n = make(Op::variable);
    n.var = v;
    return Expr(std::make_shared<Node>(n));
  }

  double operator()(const Env& env) const { return eval(*node_, env); }
  double operator()(double t, double xi, double n = 0.0) const { return eval(*node_, Env{t, xi, n}); }

  /// Symbolic partial derivative, lightly simplified.
  Expr derivative(Var v) const { return diff(*this, v); }

  bool is_constant() const { return node_->op == Op::constant; }
  double constant_value() const { return node_->value; }
  bool depends_on(Var v) const { return depends(*node_, v); }

  std::string to_string() const { return show(*node_); }

  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() + b.constant_value());
    return binary(Op::add, a, b);
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() - b.constant_value());
    return binary(Op::sub, a, b);
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return constant(0.0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.is_constant() && b.is_constant()) return constant(a.constant_value() * b.constant_value());
    return binary(Op::mul, a, b);
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_zero()) return constant(0.0);
    if (b.is_one()) return a;
    return binary(Op::div, a, b);
  }
  Expr operator-() const {
    if (is_constant()) return constant(-constant_value());
    Node n = make(Op::neg);
    n.a = node_;
    return Expr(std::make_shared<Node>(n));
  }
  static Expr power(const Expr& a, const Expr& b) {
    if (b.is_zero()) return constant(1.0);
    if (b.is_one()) return a;
    return binary(Op::pow, a, b);
  }
  static Expr call(Fn fn, const Expr& a) {
    Node n = make(Op::call);
    n.fn = fn;
    n.a = a.node_;
    return Expr(std::make_shared<Node>(n));
  }

 private:
  struct Node {
    Op op = Op::constant;
    double value = 0.0;
    Var var = Var::t;
    Fn fn = Fn::sin;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };

  static Node make(Op op, double value = 0.0) {
    Node n;
    n.op = op;
    n.value = value;
    return n;
  }

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr binary(Op op, const Expr& a, const Expr& b) {
    Node n = make(op);
    n.a = a.node_;
    n.b = b.node_;
    return Expr(std::make_shared<Node>(n));
  }

  bool is_zero() const { return is_constant() && constant_value() == 0.0; }
  bool is_one() const { return is_constant() && constant_value() == 1.0; }

  static double apply(Fn fn, double v) {
    switch (fn) {
      case Fn::sin: return std::sin(v);
      case Fn::cos: return std::cos(v);
      case Fn::tan: return std::tan(v);
      case Fn::sinh: return std::sinh(v);
      case Fn::cosh: return std::cosh(v);
      case Fn::tanh: return std::tanh(v);
      case Fn::exp: return std::exp(v);
      case Fn::log: return std::log(v);
      case Fn::sqrt: return std::sqrt(v);
      case Fn::asinh: return std::asinh(v);
      case Fn::abs: return std::abs(v);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  static double eval(const Node& n, const Env& env) {
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::variable: return n.var == Var::t ? env.t : n.var == Var::xi ? env.xi : env.n;
      case Op::add: return eval(*n.a, env) + eval(*n.b, env);
      case Op::sub: return eval(*n.a, env) - eval(*n.b, env);
      case Op::mul: return eval(*n.a, env) * eval(*n.b, env);
      case Op::div: return eval(*n.a, env) / eval(*n.b, env);
      case Op::neg: return -eval(*n.a, env);
      case Op::call: return apply(n.fn, eval(*n.a, env));
      case Op::pow: {
        const double base = eval(*n.a, env);
        if (n.b->op == Op::constant && n.b->value == 2.0) return base * base;
        if (n.b->op == Op::constant && n.b->value == 3.0) return base * base * base;
        return std::pow(base, eval(*n.b, env));
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  static bool depends(const Node& n, Var v) {
    if (n.op == Op::variable) return n.var == v;
    if (n.op == Op::constant) return false;
    return (n.a && depends(*n.a, v)) || (n.b && depends(*n.b, v));
  }

  static Expr diff(const Expr& e, Var v) {
    const Node& n = *e.node_;
    if (!depends(n, v)) return constant(0.0);
    const Expr a = n.a ? Expr(n.a) : Expr();
    const Expr b = n.b ? Expr(n.b) : Expr();
    switch (n.op) {
      case Op::constant: return constant(0.0);
      case Op::variable: return constant(1.0);
      case Op::add: return diff(a, v) + diff(b, v);
      case Op::sub: return diff(a, v) - diff(b, v);
      case Op::mul: return diff(a, v) * b + a * diff(b, v);
      case Op::div: return (diff(a, v) * b - a * diff(b, v)) / power(b, constant(2.0));
      case Op::neg: return -diff(a, v);
      case Op::pow: {
        if (!depends(*n.b, v)) {
          return b * power(a, b - constant(1.0)) * diff(a, v);
        }
        // d(a^b) = a^b (b' log a + b a'/a)
        return e * (diff(b, v) * call(Fn::log, a) + b * diff(a, v) / a);
      }
      case Op::call: {
        const Expr da = diff(a, v);
        switch (n.fn) {
          case Fn::sin: return call(Fn::cos, a) * da;
          case Fn::cos: return -(call(Fn::sin, a) * da);
          case Fn::tan: return da / power(call(Fn::cos, a), constant(2.0));
          case Fn::sinh: return call(Fn::cosh, a) * da;
          case Fn::cosh: return call(Fn::sinh, a) * da;
          case Fn::tanh: return da / power(call(Fn::cosh, a), constant(2.0));
          case Fn::exp: return e * da;
          case Fn::log: return da / a;
          case Fn::sqrt: return da / (constant(2.0) * e);
          case Fn::asinh: return da / call(Fn::sqrt, constant(1.0) + power(a, constant(2.0)));
          case Fn::abs: return a / e * da;
        }
      }
    }
    return constant(0.0);
  }

  static std::string fn_name(Fn fn) {
    switch (fn) {
      case Fn::sin: return "sin";
      case Fn::cos: return "cos";
      case Fn::tan: return "tan";
      case Fn::sinh: return "sinh";
      case Fn::cosh: return "cosh";
      case Fn::tanh: return "tanh";
      case Fn::exp: return "exp";
      case Fn::log: return "log";
      case Fn::sqrt: return "sqrt";
      case Fn::asinh: return "asinh";
      case Fn::abs: return "abs";
    }
    return "?";
  }

  static std::string show(const Node& n) {
    switch (n.op) {
      case Op::constant: {
        std::string s = std::to_string(n.value);
        return n.value < 0 ? "(" + s + ")" : s;
      }
      case Op::variable: return n.var == Var::t ? "t" : n.var == Var::xi ? "xi" : "n";
      case Op::add: return "(" + show(*n.a) + " + " + show(*n.b) + ")";
      case Op::sub: return "(" + show(*n.a) + " - " + show(*n.b) + ")";
      case Op::mul: return "(" + show(*n.a) + " * " + show(*n.b) + ")";
      case Op::div: return "(" + show(*n.a) + " / " + show(*n.b) + ")";
      case Op::pow: return "(" + show(*n.a) + " ^ " + show(*n.b) + ")";
      case Op::neg: return "(-" + show(*n.a) + ")";
      case Op::call: return fn_name(n.fn) + "(" + show(*n.a) + ")";
    }
    return "?";
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  // expression := term (('+' | '-') term)*
  Expr expression() {
    Expr e = term();
    while (true) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  // term := unary (('*' | '/') unary)*
  Expr term() {
    Expr e = unary();
    while (true) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  // unary := ('-' | '+') unary | power
  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  // power := primary ('^' unary)?, right associative
  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::power(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (src_.substr(pos_).starts_with("\xCE\xBE")) {  // UTF-8 xi
      pos_ += 2;
      return Expr::variable(Var::xi);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      fail("malformed number '" + text + "'");
    }
    if (used != text.size()) fail("malformed number '" + text + "'");
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);
    if (id == "t") return Expr::variable(Var::t);
    if (id == "xi" || id == "x") return Expr::variable(Var::xi);
    if (id == "n") return Expr::variable(Var::n);
    if (id == "pi") return Expr::constant(std::numbers::pi);
    if (id == "e") return Expr::constant(std::numbers::e);
    static constexpr std::pair<std::string_view, Expr::Fn> kFunctions[] = {
        {"sin", Expr::Fn::sin},   {"cos", Expr::Fn::cos},   {"tan", Expr::Fn::tan},     {"sinh", Expr::Fn::sinh},
        {"cosh", Expr::Fn::cosh}, {"tanh", Expr::Fn::tanh}, {"exp", Expr::Fn::exp},     {"log", Expr::Fn::log},
        {"sqrt", Expr::Fn::sqrt}, {"asinh", Expr::Fn::asinh}, {"abs", Expr::Fn::abs}};
    for (const auto& [name, fn] : kFunctions) {
      if (id == name) {
        expect('(');
        Expr arg = expression();
        expect(')');
        return Expr::call(fn, arg);
      }
    }
    fail("unknown identifier '" + std::string(id) + "'");
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + std::string(src_) + "': " + msg + " at offset " + std::to_string(pos_));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view src) { return detail::Parser(src).parse(); }

}  // namespace pathwise::expr
