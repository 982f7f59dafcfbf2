#include "ricsol/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ricsol/errors.hpp"

namespace ricsol {

CJet operator+(const CJet& a, const CJet& b) { return {a.re + b.re, a.im + b.im}; }
CJet operator-(const CJet& a, const CJet& b) { return {a.re - b.re, a.im - b.im}; }
CJet operator*(const CJet& a, const CJet& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CJet operator/(const CJet& a, const CJet& b) {
  const Jet d = abs2(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
CJet operator-(const CJet& a) { return {-a.re, -a.im}; }
CJet exp(const CJet& z) {
  const Jet r = exp(z.re);
  return {r * cos(z.im), r * sin(z.im)};
}
CJet log(const CJet& z) {
  const Jet m = sqrt(abs2(z));
  if (m.value() == 0.0) throw DomainError("log of zero");
  if (z.re.value() <= 0.0 && z.im.value() == 0.0) throw DomainError("log on the branch cut");
  // arg z = 2 atan(im / (|z| + re))
  return {log(m), 2.0 * atan(z.im / (m + z.re))};
}
CJet sin(const CJet& z) { return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)}; }
CJet cos(const CJet& z) { return {cos(z.re) * cosh(z.im), -(sin(z.re) * sinh(z.im))}; }
CJet conj(const CJet& z) { return {z.re, -z.im}; }
Jet abs2(const CJet& z) { return z.re * z.re + z.im * z.im; }

enum class Op { num, var, imag, neg, add, sub, mul, div, pow, call };

struct Expression::Node {
  Op op = Op::num;
  double value = 0.0;
  int index = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

const char* kUnary[] = {"exp", "log", "sin", "cos", "tan", "sqrt", "sinh", "cosh", "tanh", "atan", "abs"};

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  NodePtr run() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Op op, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->args = std::move(args);
    return n;
  }

  NodePtr expr() {
    NodePtr a = term();
    for (;;) {
      if (eat('+'))
        a = make(Op::add, {a, term()});
      else if (eat('-'))
        a = make(Op::sub, {a, term()});
      else
        return a;
    }
  }

  NodePtr term() {
    NodePtr a = unary();
    for (;;) {
      if (eat('*'))
        a = make(Op::mul, {a, unary()});
      else if (eat('/'))
        a = make(Op::div, {a, unary()});
      else
        return a;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Expression::Node>();
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (eat('(')) {
      std::vector<NodePtr> args{expr()};
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail("missing ')' after arguments of " + name);
      const bool unary_fn = std::find(std::begin(kUnary), std::end(kUnary), name) != std::end(kUnary);
      if (unary_fn && args.size() == 1) {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::call;
        n->fn = name;
        n->args = std::move(args);
        return n;
      }
      if (name == "pow" && args.size() == 2) return make(Op::pow, std::move(args));
      fail("unknown function " + name + "/" + std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::var;
        n->index = static_cast<int>(i);
        return n;
      }
    auto n = std::make_shared<Expression::Node>();
    if (name == "pi") {
      n->value = std::numbers::pi;
    } else if (name == "e") {
      n->value = std::numbers::e;
    } else if (name == "i") {
      n->op = Op::imag;
    } else {
      fail("unknown identifier " + name);
    }
    return n;
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// Per-type primitives.
double imag_unit(double) { throw DomainError("'i' in a real expression"); }
Jet imag_unit(const Jet&) { throw DomainError("'i' in a real expression"); }
std::complex<double> imag_unit(const std::complex<double>&) { return {0.0, 1.0}; }
CJet imag_unit(const CJet&) { return {Jet(0.0), Jet(1.0)}; }

double constant(double, double v) { return v; }
Jet constant(const Jet&, double v) { return Jet(v); }
std::complex<double> constant(const std::complex<double>&, double v) { return v; }
CJet constant(const CJet&, double v) { return {Jet(v), Jet(0.0)}; }

double is_int(double p) { return p == std::round(p) && std::abs(p) <= 64 ? p : NAN; }

template <class T>
T ipow_generic(const T& x, int n) {
  if (n < 0) return constant(x, 1.0) / ipow_generic(x, -n);
  T r = constant(x, 1.0);
  T b = x;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

double real_value(double x) { return x; }
double real_value(const Jet& x) { return x.value(); }

// Exponent that is a constant subtree, if any.
bool constant_exponent(const Expression::Node& n, double& out) {
  if (n.op == Op::num) {
    out = n.value;
    return true;
  }
  if (n.op == Op::neg && constant_exponent(*n.args[0], out)) {
    out = -out;
    return true;
  }
  if ((n.op == Op::div || n.op == Op::mul || n.op == Op::add || n.op == Op::sub)) {
    double a, b;
    if (!constant_exponent(*n.args[0], a) || !constant_exponent(*n.args[1], b)) return false;
    out = n.op == Op::div ? a / b : n.op == Op::mul ? a * b : n.op == Op::add ? a + b : a - b;
    return true;
  }
  if (n.op == Op::call && n.fn == "sqrt" && constant_exponent(*n.args[0], out)) {
    out = std::sqrt(out);
    return true;
  }
  return false;
}

template <class T>
T call(const std::string& fn, const T& x) {
  using std::exp, std::log, std::sin, std::cos, std::tan, std::sqrt, std::sinh, std::cosh, std::tanh, std::atan,
      std::abs;
  if constexpr (std::is_same_v<T, CJet>) {
    if (fn == "exp") return exp(x);
    if (fn == "log") return log(x);
    if (fn == "sin") return sin(x);
    if (fn == "cos") return cos(x);
    if (fn == "sqrt") return exp(constant(x, 0.5) * log(x));
    throw DomainError("function " + fn + " is not available for complex jets");
  } else if constexpr (std::is_same_v<T, std::complex<double>>) {
    if (fn == "exp") return std::exp(x);
    if (fn == "log") return std::log(x);
    if (fn == "sin") return std::sin(x);
    if (fn == "cos") return std::cos(x);
    if (fn == "tan") return std::tan(x);
    if (fn == "sqrt") return std::sqrt(x);
    if (fn == "sinh") return std::sinh(x);
    if (fn == "cosh") return std::cosh(x);
    if (fn == "tanh") return std::tanh(x);
    if (fn == "atan") return std::atan(x);
    if (fn == "abs") return std::abs(x);
    throw DomainError("unknown function " + fn);
  } else {
    if ((fn == "log" || fn == "sqrt") && real_value(x) < 0.0) throw DomainError(fn + " of a negative number");
    if (fn == "exp") return exp(x);
    if (fn == "log") return log(x);
    if (fn == "sin") return sin(x);
    if (fn == "cos") return cos(x);
    if (fn == "tan") return tan(x);
    if (fn == "sqrt") return sqrt(x);
    if (fn == "sinh") return sinh(x);
    if (fn == "cosh") return cosh(x);
    if (fn == "tanh") return tanh(x);
    if (fn == "atan") return atan(x);
    if (fn == "abs") return abs(x);
    throw DomainError("unknown function " + fn);
  }
}

template <class T>
T eval_node(const Expression::Node& n, std::span<const T> x) {
  switch (n.op) {
    case Op::num:
      return constant(T{}, n.value);
    case Op::var:
      return x[static_cast<std::size_t>(n.index)];
    case Op::imag:
      return imag_unit(T{});
    case Op::neg:
      return constant(T{}, 0.0) - eval_node<T>(*n.args[0], x);
    case Op::add:
      return eval_node<T>(*n.args[0], x) + eval_node<T>(*n.args[1], x);
    case Op::sub:
      return eval_node<T>(*n.args[0], x) - eval_node<T>(*n.args[1], x);
    case Op::mul:
      return eval_node<T>(*n.args[0], x) * eval_node<T>(*n.args[1], x);
    case Op::div:
      return eval_node<T>(*n.args[0], x) / eval_node<T>(*n.args[1], x);
    case Op::call:
      return call<T>(n.fn, eval_node<T>(*n.args[0], x));
    case Op::pow: {
      const T base = eval_node<T>(*n.args[0], x);
      double p = 0.0;
      if (constant_exponent(*n.args[1], p)) {
        if (!std::isnan(is_int(p))) return ipow_generic(base, static_cast<int>(p));
        if constexpr (std::is_same_v<T, double>) {
          if (base < 0.0) throw DomainError("non-integer power of a negative number");
          return std::pow(base, p);
        } else if constexpr (std::is_same_v<T, Jet>) {
          if (base.value() < 0.0) throw DomainError("non-integer power of a negative number");
          return pow(base, p);
        } else if constexpr (std::is_same_v<T, std::complex<double>>) {
          return std::pow(base, p);
        } else {
          return exp(constant(base, p) * log(base));
        }
      }
      const T e = eval_node<T>(*n.args[1], x);
      if constexpr (std::is_same_v<T, double>) {
        return std::pow(base, e);
      } else if constexpr (std::is_same_v<T, Jet>) {
        return pow(base, e);
      } else if constexpr (std::is_same_v<T, std::complex<double>>) {
        return std::pow(base, e);
      } else {
        return exp(e * log(base));
      }
    }
  }
  throw std::logic_error("bad expression node");
}

bool mentions(const Expression::Node& n, int index) {
  if (n.op == Op::var && n.index == index) return true;
  for (const auto& a : n.args)
    if (mentions(*a, index)) return true;
  return false;
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expression e;
  e.text_ = text;
  e.vars_ = variables;
  e.root_ = Parser(e.text_, e.vars_).run();
  return e;
}

bool Expression::uses(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return root_ && mentions(*root_, static_cast<int>(i));
  return false;
}

double Expression::eval(std::span<const double> x) const { return eval_node<double>(*root_, x); }
Jet Expression::eval(std::span<const Jet> x) const { return eval_node<Jet>(*root_, x); }
std::complex<double> Expression::eval(std::span<const std::complex<double>> x) const {
  return eval_node<std::complex<double>>(*root_, x);
}
CJet Expression::eval(std::span<const CJet> x) const { return eval_node<CJet>(*root_, x); }

}  // namespace ricsol
