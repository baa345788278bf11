#include "ultraflow/fnspec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "ultraflow/errors.hpp"

namespace ultraflow {

struct FnSpec::Node {
  enum class Op { number, var_z, var_n, add, sub, mul, div, neg, pow, exp, abs, fab };
  Op op = Op::number;
  double value = 0.0;  // literal, or the exponent of pow
  double b = 0.0;      // second fab argument
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using Node = FnSpec::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr leaf(Op op, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  return n;
}

NodePtr branch(Op op, std::vector<NodePtr> kids, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->kids = std::move(kids);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = branch(Op::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = branch(Op::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = branch(Op::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = branch(Op::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return branch(Op::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) {
      double sign = 1.0;
      if (accept('-')) {
        sign = -1.0;
      } else {
        accept('+');
      }
      return branch(Op::pow, {base}, sign * number());
    }
    return base;
  }

  double number() {
    skip();
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr == first) fail("expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return v;
  }

  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return leaf(Op::number, number());
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    const std::size_t at = pos_;
    const std::string name = word();
    if (name == "z") return leaf(Op::var_z);
    if (name == "n") return leaf(Op::var_n);
    if (name == "exp" || name == "abs") {
      expect('(');
      NodePtr arg = expr();
      expect(')');
      return branch(name == "exp" ? Op::exp : Op::abs, {arg});
    }
    if (name == "const") {
      expect('(');
      double sign = accept('-') ? -1.0 : 1.0;
      const double v = sign * number();
      expect(')');
      return leaf(Op::number, v);
    }
    if (name == "fab") {
      expect('(');
      double sa = accept('-') ? -1.0 : 1.0;
      const double a = sa * number();
      expect(',');
      double sb = accept('-') ? -1.0 : 1.0;
      const double b = sb * number();
      expect(')');
      if (!(std::abs(b) < 1.0)) fail("fab needs |b| < 1");
      auto n = std::make_shared<Node>();
      n->op = Op::fab;
      n->value = a;
      n->b = b;
      return n;
    }
    pos_ = at;
    fail("unknown name '" + name + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

double eval(const Node& node, double z, double n) {
  switch (node.op) {
    case Op::number:
      return node.value;
    case Op::var_z:
      return z;
    case Op::var_n:
      return n;
    case Op::add:
      return eval(*node.kids[0], z, n) + eval(*node.kids[1], z, n);
    case Op::sub:
      return eval(*node.kids[0], z, n) - eval(*node.kids[1], z, n);
    case Op::mul:
      return eval(*node.kids[0], z, n) * eval(*node.kids[1], z, n);
    case Op::div:
      return eval(*node.kids[0], z, n) / eval(*node.kids[1], z, n);
    case Op::neg:
      return -eval(*node.kids[0], z, n);
    case Op::pow:
      return std::pow(eval(*node.kids[0], z, n), node.value);
    case Op::exp:
      return std::exp(eval(*node.kids[0], z, n));
    case Op::abs:
      return std::abs(eval(*node.kids[0], z, n));
    case Op::fab:
      return node.value * std::pow(std::abs(1.0 - node.b * z), -0.5 * (n - 2.0));
  }
  return 0.0;
}

}  // namespace

FnSpec FnSpec::parse(std::string_view text) {
  FnSpec f;
  f.text_ = std::string(text);
  f.root_ = Parser(text).run();
  return f;
}

double FnSpec::operator()(double z, double n) const {
  return eval(*root_, z, n);
}

GridFn FnSpec::sample(const Eigen::VectorXd& z, double n) const {
  GridFn out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = (*this)(z(i), n);
  return out;
}

}  // namespace ultraflow
