#pragma once

// Small rational-function expressions over x, y, k.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' (int | '(' '-' int ')' | 'k'))?
//   primary := int | 'x' | 'y' | 'k' | 'pi' | 'abs' '(' expr ')' | '(' expr ')'
//
// "(-1)^k" is the only allowed use of a 'k' exponent. Whitespace is ignored.

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "s3_mat.hpp"

namespace trip {

struct ZeroDenominator : DomainError {
  using DomainError::DomainError;
};

enum class Op : std::uint8_t { Num, X, Y, K, NegOneK, Pi, Add, Sub, Mul, Div, Neg, Pow, Abs };

struct Node {
  Op op;
  Rational value;  // Num
  int exponent = 0;  // Pow
  std::shared_ptr<const Node> l, r;
};

using NodePtr = std::shared_ptr<const Node>;

inline bool same_tree(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return a == b;
  if (a->op != b->op) return false;
  if (a->op == Op::Num && a->value != b->value) return false;
  if (a->op == Op::Pow && a->exponent != b->exponent) return false;
  return same_tree(a->l, b->l) && same_tree(a->r, b->r);
}

/// Values substituted for the free symbols. sign is (-1)^k, kept separate so that
/// callers can extend k to real values on a fixed parity class.
template <class T>
struct Env {
  T x{}, y{}, k{};
  int sign = 1;
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::string_view text) : src_(text) {
    Parser p{text, 0};
    root_ = p.parse_expr();
    p.skip();
    if (p.i != text.size())
      throw ParseError("unexpected '" + std::string(text.substr(p.i, 1)) + "' at column " +
                       std::to_string(p.i + 1) + " in '" + std::string(text) + "'");
    compile(root_);
  }

  const std::string& source() const { return src_; }
  const NodePtr& root() const { return root_; }
  bool empty() const { return !root_; }

  friend bool operator==(const Expr& a, const Expr& b) { return same_tree(a.root_, b.root_); }

  /// Canonical text with minimal parentheses; parses back to the same tree.
  std::string str() const { return print(root_); }

  /// Exact evaluation. pi has no exact value unless pi_subst is given.
  Rational exact(const Rational& x, const Rational& y, long k, const Rational* pi_subst = nullptr) const {
    Env<Rational> e{x, y, Rational(k), (k % 2 == 0) ? 1 : -1};
    return eval_exact(root_, e, pi_subst);
  }

  double operator()(double x, double y, double k, int sign) const {
    double st[kMaxStack];
    int sp = 0;
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::Num: st[sp++] = in.c; break;
        case Op::X: st[sp++] = x; break;
        case Op::Y: st[sp++] = y; break;
        case Op::K: st[sp++] = k; break;
        case Op::NegOneK: st[sp++] = sign; break;
        case Op::Pi: st[sp++] = M_PI; break;
        case Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
        case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::Abs: st[sp - 1] = std::fabs(st[sp - 1]); break;
        case Op::Pow: st[sp - 1] = ipow(st[sp - 1], in.n); break;
      }
    }
    return st[0];
  }
  double operator()(double x, double y, long k = 0) const {
    return (*this)(x, y, static_cast<double>(k), (k % 2 == 0) ? 1 : -1);
  }

  bool uses_pi() const { return has(root_, Op::Pi); }
  bool uses_k() const { return has(root_, Op::K) || has(root_, Op::NegOneK); }

 private:
  static constexpr int kMaxStack = 64;
  struct Instr {
    Op op;
    double c = 0;
    int n = 0;
  };
  std::string src_;
  NodePtr root_;
  std::vector<Instr> code_;

  static double ipow(double b, int n) {
    bool inv = n < 0;
    unsigned m = inv ? -n : n;
    double r = 1;
    while (m) {
      if (m & 1) r *= b;
      b *= b;
      m >>= 1;
    }
    return inv ? 1 / r : r;
  }

  static bool has(const NodePtr& n, Op op) {
    return n && (n->op == op || has(n->l, op) || has(n->r, op));
  }

  int compile(const NodePtr& n, int depth = 0) {
    int d = depth;
    switch (n->op) {
      case Op::Num: code_.push_back({Op::Num, n->value.convert_to<double>()}); return depth + 1;
      case Op::X: case Op::Y: case Op::K: case Op::NegOneK: case Op::Pi:
        code_.push_back({n->op}); return depth + 1;
      case Op::Neg: case Op::Abs:
        d = compile(n->l, depth); code_.push_back({n->op}); break;
      case Op::Pow:
        d = compile(n->l, depth); code_.push_back({Op::Pow, 0, n->exponent}); break;
      default: {
        int a = compile(n->l, depth);
        int b = compile(n->r, depth + 1);
        d = std::max(a, b);
        code_.push_back({n->op});
      }
    }
    if (d >= kMaxStack) throw ParseError("expression nests too deeply");
    return d;
  }

  static Rational eval_exact(const NodePtr& n, const Env<Rational>& e, const Rational* pi) {
    switch (n->op) {
      case Op::Num: return n->value;
      case Op::X: return e.x;
      case Op::Y: return e.y;
      case Op::K: return e.k;
      case Op::NegOneK: return Rational(e.sign);
      case Op::Pi:
        if (!pi) throw DomainError("pi has no exact rational value");
        return *pi;
      case Op::Add: return eval_exact(n->l, e, pi) + eval_exact(n->r, e, pi);
      case Op::Sub: return eval_exact(n->l, e, pi) - eval_exact(n->r, e, pi);
      case Op::Mul: return eval_exact(n->l, e, pi) * eval_exact(n->r, e, pi);
      case Op::Div: {
        Rational d = eval_exact(n->r, e, pi);
        if (d == 0) throw ZeroDenominator("division by zero in expression");
        return eval_exact(n->l, e, pi) / d;
      }
      case Op::Neg: return -eval_exact(n->l, e, pi);
      case Op::Abs: { Rational v = eval_exact(n->l, e, pi); return v < 0 ? Rational(-v) : v; }
      case Op::Pow: {
        Rational b = eval_exact(n->l, e, pi);
        int m = n->exponent < 0 ? -n->exponent : n->exponent;
        Rational r(1);
        for (int i = 0; i < m; ++i) r *= b;
        if (n->exponent < 0) {
          if (r == 0) throw ZeroDenominator("negative power of zero");
          r = 1 / r;
        }
        return r;
      }
    }
    return 0;
  }

  static int prec(const NodePtr& n) {
    switch (n->op) {
      case Op::Add: case Op::Sub: return 1;
      case Op::Mul: case Op::Div: return 2;
      case Op::Neg: return 3;
      case Op::Pow: case Op::NegOneK: return 4;
      default: return 5;
    }
  }

  static std::string print(const NodePtr& n) {
    auto wrap = [](const NodePtr& c, bool paren) {
      std::string s = print(c);
      return paren ? "(" + s + ")" : s;
    };
    switch (n->op) {
      case Op::Num: return to_string(n->value);
      case Op::X: return "x";
      case Op::Y: return "y";
      case Op::K: return "k";
      case Op::Pi: return "pi";
      case Op::NegOneK: return "(-1)^k";
      case Op::Abs: return "abs(" + print(n->l) + ")";
      case Op::Neg: return "-" + wrap(n->l, prec(n->l) <= 3);
      case Op::Pow: {
        std::string e = n->exponent < 0 ? "(" + std::to_string(n->exponent) + ")" : std::to_string(n->exponent);
        return wrap(n->l, prec(n->l) < 5) + "^" + e;
      }
      case Op::Add: case Op::Sub:
        return wrap(n->l, prec(n->l) < 1) + (n->op == Op::Add ? "+" : "-") + wrap(n->r, prec(n->r) <= 1 || prec(n->r) == 3);
      case Op::Mul: case Op::Div:
        return wrap(n->l, prec(n->l) < 2) + (n->op == Op::Mul ? "*" : "/") + wrap(n->r, prec(n->r) <= 3);
    }
    return {};
  }

  static NodePtr make(Op op, NodePtr l = {}, NodePtr r = {}) {
    return std::make_shared<const Node>(Node{op, Rational(0), 0, std::move(l), std::move(r)});
  }

  struct Parser {
    std::string_view s;
    size_t i;

    void skip() {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eat(char c) {
      skip();
      if (i < s.size() && s[i] == c) { ++i; return true; }
      return false;
    }
    [[noreturn]] void fail(const std::string& what) {
      throw ParseError(what + " at column " + std::to_string(i + 1) + " in '" + std::string(s) + "'");
    }
    bool peek_word(std::string_view w) {
      skip();
      return s.substr(i, w.size()) == w;
    }

    NodePtr parse_expr() {
      NodePtr n = parse_term();
      for (;;) {
        if (eat('+')) n = make(Op::Add, n, parse_term());
        else if (eat('-')) n = make(Op::Sub, n, parse_term());
        else return n;
      }
    }
    NodePtr parse_term() {
      NodePtr n = parse_unary();
      for (;;) {
        if (eat('*')) n = make(Op::Mul, n, parse_unary());
        else if (eat('/')) n = make(Op::Div, n, parse_unary());
        else return n;
      }
    }
    NodePtr parse_unary() {
      if (eat('-')) return make(Op::Neg, parse_unary());
      return parse_power();
    }
    long parse_int() {
      skip();
      size_t b = i;
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
      if (b == i) fail("expected integer");
      return std::stol(std::string(s.substr(b, i - b)));
    }
    NodePtr parse_power() {
      NodePtr base = parse_primary();
      if (!eat('^')) return base;
      skip();
      if (i < s.size() && s[i] == 'k') {
        ++i;
        bool minus_one = base->op == Op::Neg && base->l->op == Op::Num && base->l->value == 1;
        if (!minus_one) fail("only (-1)^k may use a symbolic exponent");
        return make(Op::NegOneK);
      }
      int e;
      if (eat('(')) {
        bool neg = eat('-');
        e = static_cast<int>(parse_int());
        if (neg) e = -e;
        if (!eat(')')) fail("expected ')'");
      } else {
        e = static_cast<int>(parse_int());
      }
      auto n = std::make_shared<Node>(Node{Op::Pow, Rational(0), e, base, {}});
      return n;
    }
    NodePtr parse_primary() {
      skip();
      if (i >= s.size()) fail("unexpected end of expression");
      char c = s[i];
      if (c >= '0' && c <= '9') {
        size_t b = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        auto n = std::make_shared<Node>(Node{Op::Num, Rational(big_decimal(s.substr(b, i - b))), 0, {}, {}});
        return n;
      }
      if (c == '(') {
        ++i;
        NodePtr n = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return n;
      }
      if (peek_word("abs")) {
        i += 3;
        if (!eat('(')) fail("expected '(' after abs");
        NodePtr n = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return make(Op::Abs, n);
      }
      if (peek_word("pi")) { i += 2; return make(Op::Pi); }
      if (c == 'x') { ++i; return make(Op::X); }
      if (c == 'y') { ++i; return make(Op::Y); }
      if (c == 'k') { ++i; return make(Op::K); }
      fail(std::string("unexpected '") + c + "'");
    }
  };
};

}  // namespace trip
