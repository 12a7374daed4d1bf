#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace nehari {

struct Expr::Node {
  enum class Op { constant, coord, add, sub, mul, div, neg, sin, cos };
  Op op;
  double value = 0.0;  // constant
  int axis = 0;        // coord
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x, double y, double z) const {
    switch (op) {
      case Op::constant: return value;
      case Op::coord: return axis == 0 ? x : (axis == 1 ? y : z);
      case Op::add: return lhs->eval(x, y, z) + rhs->eval(x, y, z);
      case Op::sub: return lhs->eval(x, y, z) - rhs->eval(x, y, z);
      case Op::mul: return lhs->eval(x, y, z) * rhs->eval(x, y, z);
      case Op::div: return lhs->eval(x, y, z) / rhs->eval(x, y, z);
      case Op::neg: return -lhs->eval(x, y, z);
      case Op::sin: return std::sin(lhs->eval(x, y, z));
      case Op::cos: return std::cos(lhs->eval(x, y, z));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::constant;
  n->value = v;
  return n;
}

NodePtr make_coord(int axis) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::coord;
  n->axis = axis;
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    auto e = expression();
    skip_ws();
    if (pos_ != s_.size())
      fail(errc::parse, "expression: trailing input at '" + s_.substr(pos_) + "'");
    return e;
  }

private:
  NodePtr expression() {
    auto lhs = term();
    for (;;) {
      skip_ws();
      if (consume('+'))
        lhs = make(Node::Op::add, lhs, term());
      else if (consume('-'))
        lhs = make(Node::Op::sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = factor();
    for (;;) {
      skip_ws();
      if (consume('*'))
        lhs = make(Node::Op::mul, lhs, factor());
      else if (consume('/'))
        lhs = make(Node::Op::div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip_ws();
    if (consume('-')) return make(Node::Op::neg, factor());
    if (consume('+')) return factor();
    return primary();
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail(errc::parse, "expression: unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expression();
      skip_ws();
      if (!consume(')')) fail(errc::parse, "expression: missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail(errc::parse, "expression: bad number near '" + s_.substr(pos_) + "'");
      }
      pos_ += used;
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string id = identifier();
      if (id == "pi") return make_const(3.14159265358979323846);
      if (id == "x") return make_coord(0);
      if (id == "y") return make_coord(1);
      if (id == "z") return make_coord(2);
      if (id == "sin" || id == "cos") {
        skip_ws();
        if (!consume('(')) fail(errc::parse, "expression: " + id + " needs '('");
        auto arg = expression();
        skip_ws();
        if (!consume(')')) fail(errc::parse, "expression: missing ')' after " + id);
        return make(id == "sin" ? Node::Op::sin : Node::Op::cos, arg);
      }
      fail(errc::parse, "expression: unknown identifier '" + id + "'");
    }
    fail(errc::parse, std::string("expression: unexpected character '") + c + "'");
  }

  std::string identifier() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.text_ = text;
  e.root_ = Parser(text).run();
  return e;
}

double Expr::eval(double x, double y, double z) const { return root_->eval(x, y, z); }

Weight weight_from_expr(const Grid& g, const std::string& expr) {
  const Expr e = Expr::parse(expr);
  Weight w(g);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) w.values[c] = e.eval(g.cell_center(c));
  return w;
}

Field field_from_expr(const Grid& g, const std::string& expr) {
  const Expr e = Expr::parse(expr);
  Field u(g);
  for (std::int64_t i = 0; i < g.node_count(); ++i) u.values[i] = e.eval(g.node_position(i));
  u.enforce_boundary();
  return u;
}

}  // namespace nehari
