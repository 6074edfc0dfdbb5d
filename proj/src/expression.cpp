#include "dunkl/expression.hpp"

#include "dunkl/special.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dunkl::expr {

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { constant, variable, unary_minus, add, sub, mul, div, pow, call } kind;
  Complex value{};
  std::function<Complex(Complex)> fn;
  NodePtr a, b;

  Complex eval(double t) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::variable: return t;
      case Kind::unary_minus: return -a->eval(t);
      case Kind::add: return a->eval(t) + b->eval(t);
      case Kind::sub: return a->eval(t) - b->eval(t);
      case Kind::mul: return a->eval(t) * b->eval(t);
      case Kind::div: return a->eval(t) / b->eval(t);
      case Kind::pow: {
        const Complex base = a->eval(t);
        const Complex ex = b->eval(t);
        // keep real powers of positive reals exact
        if (base.imag() == 0.0 && ex.imag() == 0.0 && base.real() >= 0.0) {
          return std::pow(base.real(), ex.real());
        }
        if (base == Complex(0.0)) return 0.0;
        return std::exp(ex * std::log(base));
      }
      case Kind::call: return fn(a->eval(t));
    }
    return 0.0;
  }
};

const std::map<std::string, std::function<Complex(Complex)>>& functions() {
  static const std::map<std::string, std::function<Complex(Complex)>> table = {
      {"exp", [](Complex z) { return std::exp(z); }},
      {"log", [](Complex z) { return std::log(z); }},
      {"sqrt", [](Complex z) { return std::sqrt(z); }},
      {"sin", [](Complex z) { return std::sin(z); }},
      {"cos", [](Complex z) { return std::cos(z); }},
      {"tan", [](Complex z) { return std::tan(z); }},
      {"sinh", [](Complex z) { return std::sinh(z); }},
      {"cosh", [](Complex z) { return std::cosh(z); }},
      {"tanh", [](Complex z) { return std::tanh(z); }},
      {"abs", [](Complex z) { return Complex(std::abs(z)); }},
      {"gamma", [](Complex z) { return special::tgamma(z); }},
  };
  return table;
}

class Parser {
public:
  Parser(const std::string& s, std::string var, bool allow_var)
      : s_(s), var_(std::move(var)), allow_var_(allow_var) {}

  NodePtr parse() {
    NodePtr n = expression();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

private:
  const std::string& s_;
  std::string var_;
  bool allow_var_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Node::Kind::add, lhs, term());
      else if (accept('-')) lhs = make(Node::Kind::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Node::Kind::mul, lhs, unary());
      else if (accept('/')) lhs = make(Node::Kind::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::unary_minus, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr n = expression();
      if (!accept(')')) fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::constant;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == var_) {
        if (!allow_var_) fail("variable not allowed here");
        return make(Node::Kind::variable);
      }
      auto constant = [](Complex v) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::constant;
        n->value = v;
        return n;
      };
      if (name == "pi") return constant(std::numbers::pi);
      if (name == "e") return constant(std::numbers::e);
      if (name == "i") return constant(Complex(0.0, 1.0));
      const auto it = functions().find(name);
      if (it == functions().end()) fail("unknown name '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      NodePtr arg = expression();
      if (!accept(')')) fail("missing ')'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::call;
      n->fn = it->second;
      n->a = std::move(arg);
      return n;
    }
    fail("unexpected character");
  }
};

}  // namespace

Expression parse(const std::string& text, const std::string& variable) {
  NodePtr root = Parser(text, variable, true).parse();
  return [root](double t) { return root->eval(t); };
}

Complex parse_constant(const std::string& text) {
  return Parser(text, "", false).parse()->eval(0.0);
}

}  // namespace dunkl::expr
