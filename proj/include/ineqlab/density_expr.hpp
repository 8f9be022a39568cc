#pragma once

#include <map>
#include <memory>
#include <string>

namespace ineqlab {

// Arithmetic expression over named variables: + - * / ^, unary minus,
// parentheses, constants pi and e, and exp log sqrt abs sin cos tanh
// (one argument) and pow min max (two arguments).
class DensityExpr {
 public:
  // Throws Error(config) with the offending column.
  static DensityExpr parse(const std::string& text);

  double eval(const std::map<std::string, double>& vars) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace ineqlab
