#include "wsurg/errors.hpp"
#include "wsurg/registry.hpp"

#include <cctype>

namespace wsurg {

struct Expr::Node {
  enum class Op { Num, Var, Neg, Not, Add, Sub, Mul, Div, Mod, Pow, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Cond };
  Op op = Op::Num;
  Integer num;
  std::string var;
  std::shared_ptr<const Node> a, b, c;
};

namespace {

using Node = Expr::Node;
using NodeP = std::shared_ptr<const Node>;

NodeP make(Node::Op op, NodeP a = nullptr, NodeP b = nullptr, NodeP c = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = std::move(c);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& t) : t_(t) {}

  NodeP parse() {
    NodeP n = cond();
    ws();
    if (p_ != t_.size()) fail("trailing input");
    return n;
  }

 private:
  void ws() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool eat(const char* s) {
    ws();
    std::string tok(s);
    if (t_.compare(p_, tok.size(), tok) != 0) return false;
    // do not split "<=" into "<" or "==" into "="
    if (tok.size() == 1 && p_ + 1 < t_.size() && (tok == "<" || tok == ">" || tok == "!") && t_[p_ + 1] == '=')
      return false;
    p_ += tok.size();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("cannot parse expression '" + t_ + "' at offset " + std::to_string(p_) + ": " + msg);
  }

  NodeP cond() {
    NodeP c = lor();
    if (eat("?")) {
      NodeP a = cond();
      if (!eat(":")) fail("expected ':'");
      NodeP b = cond();
      return make(Node::Op::Cond, c, a, b);
    }
    return c;
  }
  NodeP lor() {
    NodeP l = land();
    while (eat("||")) l = make(Node::Op::Or, l, land());
    return l;
  }
  NodeP land() {
    NodeP l = cmp();
    while (eat("&&")) l = make(Node::Op::And, l, cmp());
    return l;
  }
  NodeP cmp() {
    NodeP l = add();
    for (;;) {
      if (eat("==")) l = make(Node::Op::Eq, l, add());
      else if (eat("!=")) l = make(Node::Op::Ne, l, add());
      else if (eat("<=")) l = make(Node::Op::Le, l, add());
      else if (eat(">=")) l = make(Node::Op::Ge, l, add());
      else if (eat("<")) l = make(Node::Op::Lt, l, add());
      else if (eat(">")) l = make(Node::Op::Gt, l, add());
      else return l;
    }
  }
  NodeP add() {
    NodeP l = mul();
    for (;;) {
      if (eat("+")) l = make(Node::Op::Add, l, mul());
      else if (eat("-")) l = make(Node::Op::Sub, l, mul());
      else return l;
    }
  }
  NodeP mul() {
    NodeP l = unary();
    for (;;) {
      if (eat("*")) l = make(Node::Op::Mul, l, unary());
      else if (eat("/")) l = make(Node::Op::Div, l, unary());
      else if (eat("%")) l = make(Node::Op::Mod, l, unary());
      else return l;
    }
  }
  NodeP unary() {
    if (eat("-")) return make(Node::Op::Neg, unary());
    if (eat("!")) return make(Node::Op::Not, unary());
    if (eat("+")) return unary();
    return power();
  }
  NodeP power() {
    NodeP base = atom();
    if (eat("^")) return make(Node::Op::Pow, base, unary());  // right associative
    return base;
  }
  NodeP atom() {
    ws();
    if (p_ >= t_.size()) fail("unexpected end of input");
    if (eat("(")) {
      NodeP n = cond();
      if (!eat(")")) fail("expected ')'");
      return n;
    }
    char c = t_[p_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = p_;
      while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Num;
      n->num = Integer(t_.substr(start, p_ - start));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = p_;
      while (p_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_')) ++p_;
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Var;
      n->var = t_.substr(start, p_ - start);
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& t_;
  std::size_t p_ = 0;
};

Integer eval_node(const Node& n, const std::map<std::string, Integer>& vars, const std::string& text) {
  auto fail = [&](const std::string& msg) { throw ValidationError("evaluating '" + text + "': " + msg); };
  auto A = [&] { return eval_node(*n.a, vars, text); };
  auto B = [&] { return eval_node(*n.b, vars, text); };
  switch (n.op) {
    case Node::Op::Num: return n.num;
    case Node::Op::Var: {
      auto it = vars.find(n.var);
      if (it == vars.end()) fail("unbound variable '" + n.var + "'");
      return it->second;
    }
    case Node::Op::Neg: return -A();
    case Node::Op::Not: return A() == 0 ? 1 : 0;
    case Node::Op::Add: return A() + B();
    case Node::Op::Sub: return A() - B();
    case Node::Op::Mul: return A() * B();
    case Node::Op::Div: {
      Integer x = A(), y = B();
      if (y == 0 || x % y != 0) fail("inexact division");
      return x / y;
    }
    case Node::Op::Mod: {
      Integer x = A(), y = B();
      if (y <= 0) fail("modulus must be positive");
      Integer r = x % y;
      return r < 0 ? r + y : r;
    }
    case Node::Op::Pow: {
      Integer x = A(), e = B();
      if (e < 0) fail("negative exponent");
      if (e > 100000) fail("exponent too large");
      return boost::multiprecision::pow(x, static_cast<unsigned>(to_long(e)));
    }
    case Node::Op::Lt: return A() < B() ? 1 : 0;
    case Node::Op::Le: return A() <= B() ? 1 : 0;
    case Node::Op::Gt: return A() > B() ? 1 : 0;
    case Node::Op::Ge: return A() >= B() ? 1 : 0;
    case Node::Op::Eq: return A() == B() ? 1 : 0;
    case Node::Op::Ne: return A() != B() ? 1 : 0;
    case Node::Op::And: return (A() != 0 && B() != 0) ? 1 : 0;
    case Node::Op::Or: return (A() != 0 || B() != 0) ? 1 : 0;
    case Node::Op::Cond: return A() != 0 ? B() : eval_node(*n.c, vars, text);
  }
  return 0;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

Integer Expr::eval(const std::map<std::string, Integer>& vars) const {
  if (!root_) throw ValidationError("empty expression");
  return eval_node(*root_, vars, text_);
}

}  // namespace wsurg
