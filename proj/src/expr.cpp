#include "newton_critic/expr.hpp"

#include <cctype>
#include <cmath>

namespace nc {

namespace {

using Kind = ExprNode::Kind;

ExprAst make(Kind k, std::size_t offset, std::vector<ExprAst> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->offset = offset;
  n->args = std::move(args);
  return n;
}

// Exact value at the origin; exp arguments are checked to vanish there.
Rational value_at_origin(const ExprAst& a) {
  switch (a->kind) {
    case Kind::Literal: return a->value;
    case Kind::V:
    case Kind::Theta: return Rational(0);
    case Kind::Add: return value_at_origin(a->args[0]) + value_at_origin(a->args[1]);
    case Kind::Sub: return value_at_origin(a->args[0]) - value_at_origin(a->args[1]);
    case Kind::Mul: return value_at_origin(a->args[0]) * value_at_origin(a->args[1]);
    case Kind::Neg: return -value_at_origin(a->args[0]);
    case Kind::Pow: return pow(value_at_origin(a->args[0]), a->exponent);
    case Kind::Exp: return Rational(1);
  }
  return Rational(0);
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprAst run() {
    ExprAst e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg, ErrorCode code = ErrorCode::Syntax) const { error_at(pos_, msg, code); }
  [[noreturn]] void error_at(std::size_t at, const std::string& msg, ErrorCode code = ErrorCode::Syntax) const {
    throw Error(code, msg + " at byte " + std::to_string(at), at);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) {
      skip();
      error(pos_ < s_.size() ? "expected '" + std::string(1, c) + "'" : "unexpected end of input, expected '" +
                                                                              std::string(1, c) + "'");
    }
  }
  bool word_ahead(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    return end >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[end]));
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  // natural or p/q; denominators must follow the slash immediately
  Rational number() {
    std::size_t start = pos_;
    std::string n = digits();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      std::string d = digits();
      if (d.empty()) error("expected denominator");
      if (Integer(d, 10) == 0) error_at(start, "zero denominator");
      Rational q{Integer(n, 10), Integer(d, 10)};
      q.canonicalize();
      return q;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') error("decimal literals are not supported; use p/q");
    return Rational(Integer(n, 10));
  }

  ExprAst expr() {
    ExprAst left = term();
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (accept('+'))
        left = make(Kind::Add, at, {left, term()});
      else if (accept('-'))
        left = make(Kind::Sub, at, {left, term()});
      else
        return left;
    }
  }

  ExprAst term() {
    ExprAst left = factor();
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (!accept('*')) return left;
      left = make(Kind::Mul, at, {left, factor()});
    }
  }

  ExprAst factor() {
    skip();
    std::size_t at = pos_;
    if (accept('-')) return make(Kind::Neg, at, {factor()});
    ExprAst b = base();
    skip();
    std::size_t cat = pos_;
    if (!accept('^')) return b;
    skip();
    std::size_t eat = pos_;
    Rational e;
    if (accept('(')) {
      skip();
      bool neg = accept('-');
      skip();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected exponent");
      e = number();
      if (neg) e = -e;
      expect(')');
    } else if (peek('-')) {
      error_at(eat, "exponent must be a nonnegative integer", ErrorCode::NonIntegerExponent);
    } else {
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected exponent");
      e = Rational(Integer(digits(), 10));
      if (pos_ < s_.size() && (s_[pos_] == '/' || s_[pos_] == '.'))
        error_at(eat, "exponent must be a nonnegative integer (write 1/2*v^2, not v^2/2)", ErrorCode::NonIntegerExponent);
    }
    if (e.get_den() != 1 || sign(e) < 0)
      error_at(eat, "exponent must be a nonnegative integer", ErrorCode::NonIntegerExponent);
    if (e > 100000) error_at(eat, "exponent too large");
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Pow;
    n->offset = cat;
    n->exponent = static_cast<unsigned>(e.get_num().get_ui());
    n->args = {b};
    return n;
  }

  ExprAst base() {
    skip();
    std::size_t at = pos_;
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::Literal;
      n->offset = at;
      n->value = number();
      return n;
    }
    if (accept('(')) {
      ExprAst e = expr();
      expect(')');
      return e;
    }
    if (word_ahead("theta")) {
      pos_ += 5;
      return make(Kind::Theta, at);
    }
    if (word_ahead("v")) {
      pos_ += 1;
      return make(Kind::V, at);
    }
    if (word_ahead("exp")) {
      pos_ += 3;
      expect('(');
      ExprAst arg = expr();
      expect(')');
      if (sign(value_at_origin(arg)) != 0)
        error_at(at, "exp argument must vanish at the origin", ErrorCode::ExpNotVanishing);
      return make(Kind::Exp, at, {arg});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      error("unknown identifier '" + std::string(s_.substr(pos_, end - pos_)) + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

using Keep = std::function<bool(const ExponentPair&)>;

PuiseuxPoly expand_node(const ExprAst& a, const Keep& keep) {
  auto cut = [&](const PuiseuxPoly& x) { return keep ? filter_terms(x, keep) : x; };
  switch (a->kind) {
    case Kind::Literal: return PuiseuxPoly::constant(Coefficient(a->value));
    case Kind::V: return cut(PuiseuxPoly::v());
    case Kind::Theta: return cut(PuiseuxPoly::theta());
    case Kind::Add: return expand_node(a->args[0], keep) + expand_node(a->args[1], keep);
    case Kind::Sub: return expand_node(a->args[0], keep) - expand_node(a->args[1], keep);
    case Kind::Mul: return cut(expand_node(a->args[0], keep) * expand_node(a->args[1], keep));
    case Kind::Neg: return -expand_node(a->args[0], keep);
    case Kind::Pow: {
      PuiseuxPoly b = expand_node(a->args[0], keep);
      PuiseuxPoly r = PuiseuxPoly::constant(Coefficient(1));
      for (unsigned i = 0; i < a->exponent; ++i) r = cut(r * b);
      return r;
    }
    case Kind::Exp: {
      PuiseuxPoly u = expand_node(a->args[0], keep);
      PuiseuxPoly sum = PuiseuxPoly::constant(Coefficient(1)), term = sum;
      for (unsigned k = 1;; ++k) {
        term = cut(term * u);
        if (term.is_zero()) break;
        term = Coefficient(Rational(1, k)) * term;
        sum = sum + term;
      }
      return sum;
    }
  }
  return PuiseuxPoly();
}

double majorant(const ExprAst& a, double r) {
  switch (a->kind) {
    case Kind::Literal: return std::abs(a->value.get_d());
    case Kind::V:
    case Kind::Theta: return r;
    case Kind::Add:
    case Kind::Sub: return majorant(a->args[0], r) + majorant(a->args[1], r);
    case Kind::Mul: return majorant(a->args[0], r) * majorant(a->args[1], r);
    case Kind::Neg: return majorant(a->args[0], r);
    case Kind::Pow: return std::pow(majorant(a->args[0], r), a->exponent);
    case Kind::Exp: return std::exp(majorant(a->args[0], r));
  }
  return 0;
}

void print(const ExprAst& a, std::string& out) {
  switch (a->kind) {
    case Kind::Literal: out += nc::to_string(a->value); return;
    case Kind::V: out += "v"; return;
    case Kind::Theta: out += "theta"; return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
      out += "(";
      print(a->args[0], out);
      out += a->kind == Kind::Add ? " + " : (a->kind == Kind::Sub ? " - " : "*");
      print(a->args[1], out);
      out += ")";
      return;
    case Kind::Neg:
      out += "-";
      print(a->args[0], out);
      return;
    case Kind::Pow:
      out += "(";
      print(a->args[0], out);
      out += ")^" + std::to_string(a->exponent);
      return;
    case Kind::Exp:
      out += "exp(";
      print(a->args[0], out);
      out += ")";
      return;
  }
}

}  // namespace

ExprAst parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const ExprAst& ast) {
  std::string s;
  print(ast, s);
  return s;
}

bool contains_exp(const ExprAst& ast) {
  if (ast->kind == Kind::Exp) return true;
  for (const auto& c : ast->args)
    if (contains_exp(c)) return true;
  return false;
}

double evaluate_ast(const ExprAst& a, double v, double theta) {
  switch (a->kind) {
    case Kind::Literal: return a->value.get_d();
    case Kind::V: return v;
    case Kind::Theta: return theta;
    case Kind::Add: return evaluate_ast(a->args[0], v, theta) + evaluate_ast(a->args[1], v, theta);
    case Kind::Sub: return evaluate_ast(a->args[0], v, theta) - evaluate_ast(a->args[1], v, theta);
    case Kind::Mul: return evaluate_ast(a->args[0], v, theta) * evaluate_ast(a->args[1], v, theta);
    case Kind::Neg: return -evaluate_ast(a->args[0], v, theta);
    case Kind::Pow: return std::pow(evaluate_ast(a->args[0], v, theta), a->exponent);
    case Kind::Exp: return std::exp(evaluate_ast(a->args[0], v, theta));
  }
  return 0;
}

double truncation_tail_bound(const ExprAst& ast, unsigned order, double v, double theta) {
  if (!contains_exp(ast)) return 0.0;
  double x = std::max(std::abs(v), std::abs(theta));
  if (x == 0) return 0.0;
  // Coefficients of the degree-n part are bounded by G(R)/R^n for the majorant G.
  double r = std::max(1.0, 2 * x);
  double ratio = x / r;
  return majorant(ast, r) * std::pow(ratio, order + 1) / (1 - ratio);
}

ExpandedGerm expand(const ExprAst& ast, unsigned order) {
  if (order < 2) fail(ErrorCode::InvalidArgument, "truncation order must be at least 2");
  ExpandedGerm g;
  if (!contains_exp(ast)) {
    g.poly = expand_node(ast, nullptr);
    g.exact = true;
    Rational deg(0);
    for (const auto& [e, c] : g.poly.terms()) deg = std::max(deg, Rational(e.p + e.q));
    g.truncation_order = std::max<unsigned>(order, static_cast<unsigned>(deg.get_num().get_ui()));
    return g;
  }
  const Rational t(order);
  Keep keep = [t](const ExponentPair& e) { return e.p + e.q <= t; };
  g.poly = expand_node(ast, keep);
  g.exact = false;
  g.truncation_order = order;
  return g;
}

ExpandedGerm normalize(const ExpandedGerm& g) {
  ExpandedGerm out = g;
  out.poly.erase(ExponentPair{Rational(0), 0});
  out.poly.erase(ExponentPair{Rational(0), 1});
  if (out.poly.is_zero()) fail(ErrorCode::DegenerateInput, "germ is identically zero after normalization");
  bool mixed = false;
  for (const auto& [e, c] : out.poly.terms())
    if (sign(e.p) > 0 && e.q > 0) mixed = true;
  if (!mixed) fail(ErrorCode::DegenerateInput, "germ has no mixed term v^p*theta^q (p, q > 0)");
  return out;
}

ExpandedGerm load_germ(std::string_view text, unsigned order) { return normalize(expand(parse(text), order)); }

}  // namespace nc
