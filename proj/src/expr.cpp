#include "trihyp/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace trihyp {

enum class Kind { Const, VarT, VarX, VarXi, Add, Sub, Mul, Div, Pow, Neg, Abs };

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // Const only
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Const;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n && n->kind == Kind::Const && n->value == v;
}

// Light simplification so derivative trees stay readable and cheap.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return make_const(a->value + b->value);
  return make(Kind::Add, a, b);
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return make_const(a->value - b->value);
  if (is_const(a, 0.0)) return make(Kind::Neg, b);
  return make(Kind::Sub, a, b);
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return make_const(a->value * b->value);
  return make(Kind::Mul, a, b);
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const && b->value != 0.0)
    return make_const(a->value / b->value);
  return make(Kind::Div, a, b);
}

NodePtr pw(NodePtr a, NodePtr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return make_const(1.0);
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return make_const(std::pow(a->value, b->value));
  return make(Kind::Pow, a, b);
}

struct Token {
  enum Type { Num, Ident, Op, LParen, RParen, End } type = End;
  double num = 0.0;
  char op = 0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    if (pos_ >= s_.size()) {
      tok_ = Token{};
      return;
    }
    char c = s_[pos_];
    if (std::isdigit((unsigned char)c) || c == '.') {
      size_t used = 0;
      double v;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        throw ParseError("bad numeric literal at position " + std::to_string(pos_));
      }
      pos_ += used;
      tok_ = Token{};
      tok_.type = Token::Num;
      tok_.num = v;
      return;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
        ++pos_;
      tok_ = Token{};
      tok_.type = Token::Ident;
      tok_.ident = s_.substr(start, pos_ - start);
      return;
    }
    if (c == '(') {
      ++pos_;
      tok_ = Token{};
      tok_.type = Token::LParen;
      return;
    }
    if (c == ')') {
      ++pos_;
      tok_ = Token{};
      tok_.type = Token::RParen;
      return;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      ++pos_;
      tok_ = Token{};
      tok_.type = Token::Op;
      tok_.op = c;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "' in expression");
  }

  std::string s_;
  size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    if (lex_.peek().type != Token::End) throw ParseError("trailing input in expression");
    return e;
  }

 private:
  NodePtr parse_sum() {
    NodePtr e = parse_product();
    while (lex_.peek().type == Token::Op &&
           (lex_.peek().op == '+' || lex_.peek().op == '-')) {
      char op = lex_.next().op;
      NodePtr r = parse_product();
      e = (op == '+') ? add(e, r) : sub(e, r);
    }
    return e;
  }

  NodePtr parse_product() {
    NodePtr e = parse_unary();
    while (lex_.peek().type == Token::Op &&
           (lex_.peek().op == '*' || lex_.peek().op == '/')) {
      char op = lex_.next().op;
      NodePtr r = parse_unary();
      e = (op == '*') ? mul(e, r) : div(e, r);
    }
    return e;
  }

  NodePtr parse_unary() {
    if (lex_.peek().type == Token::Op && lex_.peek().op == '-') {
      lex_.next();
      NodePtr e = parse_unary();
      if (e->kind == Kind::Const) return make_const(-e->value);
      return make(Kind::Neg, e);
    }
    if (lex_.peek().type == Token::Op && lex_.peek().op == '+') {
      lex_.next();
      return parse_unary();
    }
    return parse_power();
  }

  // ^ binds tighter than unary minus and associates right.
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (lex_.peek().type == Token::Op && lex_.peek().op == '^') {
      lex_.next();
      NodePtr expo = parse_unary();
      return pw(base, expo);
    }
    return base;
  }

  NodePtr parse_atom() {
    Token t = lex_.next();
    switch (t.type) {
      case Token::Num:
        return make_const(t.num);
      case Token::Ident: {
        if (t.ident == "t") return make(Kind::VarT);
        if (t.ident == "x") return make(Kind::VarX);
        if (t.ident == "xi") return make(Kind::VarXi);
        if (t.ident == "pi") return make_const(M_PI);
        if (t.ident == "e") return make_const(M_E);
        if (t.ident == "abs") {
          if (lex_.next().type != Token::LParen)
            throw ParseError("abs requires parentheses");
          NodePtr arg = parse_sum();
          if (lex_.next().type != Token::RParen)
            throw ParseError("missing ')' after abs argument");
          return make(Kind::Abs, arg);
        }
        throw ParseError("unknown identifier '" + t.ident + "'");
      }
      case Token::LParen: {
        NodePtr e = parse_sum();
        if (lex_.next().type != Token::RParen)
          throw ParseError("missing closing parenthesis");
        return e;
      }
      default:
        throw ParseError("unexpected token in expression");
    }
  }

  Lexer lex_;
};

double eval_node(const Expr::Node* n, double t, double x, double xi) {
  switch (n->kind) {
    case Kind::Const: return n->value;
    case Kind::VarT: return t;
    case Kind::VarX: return x;
    case Kind::VarXi: return xi;
    case Kind::Add: return eval_node(n->a.get(), t, x, xi) + eval_node(n->b.get(), t, x, xi);
    case Kind::Sub: return eval_node(n->a.get(), t, x, xi) - eval_node(n->b.get(), t, x, xi);
    case Kind::Mul: return eval_node(n->a.get(), t, x, xi) * eval_node(n->b.get(), t, x, xi);
    case Kind::Div: return eval_node(n->a.get(), t, x, xi) / eval_node(n->b.get(), t, x, xi);
    case Kind::Pow: return std::pow(eval_node(n->a.get(), t, x, xi), eval_node(n->b.get(), t, x, xi));
    case Kind::Neg: return -eval_node(n->a.get(), t, x, xi);
    case Kind::Abs: return std::fabs(eval_node(n->a.get(), t, x, xi));
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n, Kind var) {
  switch (n->kind) {
    case Kind::Const: return make_const(0.0);
    case Kind::VarT: return make_const(var == Kind::VarT ? 1.0 : 0.0);
    case Kind::VarX: return make_const(var == Kind::VarX ? 1.0 : 0.0);
    case Kind::VarXi: return make_const(var == Kind::VarXi ? 1.0 : 0.0);
    case Kind::Add: return add(diff_node(n->a, var), diff_node(n->b, var));
    case Kind::Sub: return sub(diff_node(n->a, var), diff_node(n->b, var));
    case Kind::Mul:
      return add(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var)));
    case Kind::Div:
      return div(sub(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var))),
                 mul(n->b, n->b));
    case Kind::Pow: {
      if (n->b->kind == Kind::Const) {
        double c = n->b->value;
        return mul(mul(make_const(c), pw(n->a, make_const(c - 1.0))), diff_node(n->a, var));
      }
      throw ParseError("derivative of non-constant exponent is unsupported");
    }
    case Kind::Neg: return make(Kind::Neg, diff_node(n->a, var));
    case Kind::Abs: {
      // d|u| = sign(u) u' written as u/|u| * u'; callers avoid the kink.
      NodePtr sgn = div(n->a, make(Kind::Abs, n->a));
      return mul(sgn, diff_node(n->a, var));
    }
  }
  return make_const(0.0);
}

void print_node(const Expr::Node* n, std::ostream& os) {
  switch (n->kind) {
    case Kind::Const: os << n->value; return;
    case Kind::VarT: os << "t"; return;
    case Kind::VarX: os << "x"; return;
    case Kind::VarXi: os << "xi"; return;
    case Kind::Add: os << "("; print_node(n->a.get(), os); os << " + "; print_node(n->b.get(), os); os << ")"; return;
    case Kind::Sub: os << "("; print_node(n->a.get(), os); os << " - "; print_node(n->b.get(), os); os << ")"; return;
    case Kind::Mul: os << "("; print_node(n->a.get(), os); os << "*"; print_node(n->b.get(), os); os << ")"; return;
    case Kind::Div: os << "("; print_node(n->a.get(), os); os << "/"; print_node(n->b.get(), os); os << ")"; return;
    case Kind::Pow: os << "("; print_node(n->a.get(), os); os << "^"; print_node(n->b.get(), os); os << ")"; return;
    case Kind::Neg: os << "(-"; print_node(n->a.get(), os); os << ")"; return;
    case Kind::Abs: os << "abs("; print_node(n->a.get(), os); os << ")"; return;
  }
}

}  // namespace

Expr Expr::parse(const std::string& text) { return Expr(Parser(text).run()); }
Expr Expr::constant(double v) { return Expr(make_const(v)); }
Expr Expr::var_t() { return Expr(make(Kind::VarT)); }
Expr Expr::var_x() { return Expr(make(Kind::VarX)); }
Expr Expr::var_xi() { return Expr(make(Kind::VarXi)); }

double Expr::eval(double t, double x, double xi) const {
  if (!node_) return 0.0;
  return eval_node(node_.get(), t, x, xi);
}

Expr Expr::derivative(const std::string& var) const {
  if (!node_) return constant(0.0);
  Kind k;
  if (var == "t") k = Kind::VarT;
  else if (var == "x") k = Kind::VarX;
  else if (var == "xi") k = Kind::VarXi;
  else throw ParseError("unknown differentiation variable '" + var + "'");
  return Expr(diff_node(node_, k));
}

bool Expr::is_constant(double v) const { return is_const(node_, v); }

std::string Expr::str() const {
  if (!node_) return "0";
  std::ostringstream os;
  print_node(node_.get(), os);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(div(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(make(Kind::Neg, a.node_)); }
Expr Expr::pow(const Expr& base, const Expr& exponent) { return Expr(pw(base.node_, exponent.node_)); }
Expr Expr::abs(const Expr& arg) { return Expr(make(Kind::Abs, arg.node_)); }

}  // namespace trihyp
