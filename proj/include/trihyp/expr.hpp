#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace trihyp {

/// Thrown on malformed expression text or out-of-grammar constructs.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parsed arithmetic expression over the variables t, x, xi.
///
/// Grammar: literals, named constants (pi, e), the variables t, x, xi,
/// binary + - * / ^, unary -, abs(...), parentheses. This is the whole
/// surface accepted in operator config files; there is deliberately no
/// general function library.
class Expr {
 public:
  Expr() = default;

  static Expr parse(const std::string& text);
  static Expr constant(double v);
  static Expr var_t();
  static Expr var_x();
  static Expr var_xi();

  bool empty() const { return node_ == nullptr; }

  double eval(double t, double x, double xi) const;

  /// Exact derivative as a new expression tree. var is one of "t","x","xi".
  Expr derivative(const std::string& var) const;

  /// True when the tree is a literal constant equal to v.
  bool is_constant(double v) const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  static Expr pow(const Expr& base, const Expr& exponent);
  static Expr abs(const Expr& arg);

  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

}  // namespace trihyp
