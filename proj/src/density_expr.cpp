#include "ineqlab/density_expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "ineqlab/error.hpp"

namespace ineqlab {

struct DensityExpr::Node {
  enum class Op { number, variable, neg, add, sub, mul, div, pow, call };
  Op op = Op::number;
  double value = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const DensityExpr::Node>;
using Op = DensityExpr::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args, std::string name = {}, double value = 0.0) {
  auto n = std::make_shared<DensityExpr::Node>();
  n->op = op;
  n->args = std::move(args);
  n->name = std::move(name);
  n->value = value;
  return n;
}

int arity(const std::string& fn) {
  static const char* one[] = {"exp", "log", "sqrt", "abs", "sin", "cos", "tanh"};
  static const char* two[] = {"pow", "min", "max"};
  for (auto* f : one) {
    if (fn == f) return 1;
  }
  for (auto* f : two) {
    if (fn == f) return 2;
  }
  return -1;
}

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::config,
                "density expression, column " + std::to_string(pos_ + 1) + ": " + msg);
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

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (eat('+')) {
        n = make(Op::add, {n, term()});
      } else if (eat('-')) {
        n = make(Op::sub, {n, term()});
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (eat('*')) {
        n = make(Op::mul, {n, unary()});
      } else if (eat('/')) {
        n = make(Op::div, {n, unary()});
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (eat('^')) return make(Op::pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (eat('(')) {
      auto n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return make(Op::number, {}, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      std::string name = s_.substr(start, pos_ - start);
      if (eat('(')) {
        int k = arity(name);
        if (k < 0) fail("unknown function '" + name + "'");
        std::vector<NodePtr> args{expr()};
        while (eat(',')) args.push_back(expr());
        if (!eat(')')) fail("expected ')'");
        if (static_cast<int>(args.size()) != k) {
          fail("'" + name + "' takes " + std::to_string(k) + " argument(s)");
        }
        return make(Op::call, std::move(args), name);
      }
      if (name == "pi") return make(Op::number, {}, {}, std::numbers::pi);
      if (name == "e") return make(Op::number, {}, {}, std::numbers::e);
      return make(Op::variable, {}, name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const DensityExpr::Node& n, const std::map<std::string, double>& vars) {
  auto arg = [&](std::size_t k) { return eval_node(*n.args[k], vars); };
  switch (n.op) {
    case Op::number: return n.value;
    case Op::variable: {
      auto it = vars.find(n.name);
      if (it == vars.end()) {
        throw Error(ErrorCode::config, "density expression: unknown variable '" + n.name + "'");
      }
      return it->second;
    }
    case Op::neg: return -arg(0);
    case Op::add: return arg(0) + arg(1);
    case Op::sub: return arg(0) - arg(1);
    case Op::mul: return arg(0) * arg(1);
    case Op::div: return arg(0) / arg(1);
    case Op::pow: return std::pow(arg(0), arg(1));
    case Op::call: {
      const auto& f = n.name;
      if (f == "exp") return std::exp(arg(0));
      if (f == "log") return std::log(arg(0));
      if (f == "sqrt") return std::sqrt(arg(0));
      if (f == "abs") return std::abs(arg(0));
      if (f == "sin") return std::sin(arg(0));
      if (f == "cos") return std::cos(arg(0));
      if (f == "tanh") return std::tanh(arg(0));
      if (f == "pow") return std::pow(arg(0), arg(1));
      if (f == "min") return std::min(arg(0), arg(1));
      if (f == "max") return std::max(arg(0), arg(1));
      break;
    }
  }
  throw Error(ErrorCode::config, "density expression: bad node");
}

}  // namespace

DensityExpr DensityExpr::parse(const std::string& text) {
  DensityExpr d;
  d.text_ = text;
  d.root_ = Parser(d.text_).parse();
  return d;
}

double DensityExpr::eval(const std::map<std::string, double>& vars) const {
  return eval_node(*root_, vars);
}

}  // namespace ineqlab
