#pragma once

#include <memory>
#include <string>

#include "grid.hpp"

namespace nehari {

/// Parsed arithmetic expression over the coordinates x, y, z with +, -, *, /,
/// parentheses, numeric literals, pi, sin and cos. Used for weight
/// coefficients and direction fields in configs.
class Expr {
public:
  static Expr parse(const std::string& text);

  double eval(double x, double y, double z) const;
  double eval(const std::array<double, 3>& p) const { return eval(p[0], p[1], p[2]); }
  const std::string& text() const { return text_; }

  struct Node;

private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Samples an expression at cell centers.
Weight weight_from_expr(const Grid& g, const std::string& expr);

/// Samples an expression at nodes and zeroes the boundary.
Field field_from_expr(const Grid& g, const std::string& expr);

}  // namespace nehari
