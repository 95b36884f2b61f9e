#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "newton_critic/puiseux.hpp"

namespace nc {

struct ExprNode {
  enum class Kind { Literal, V, Theta, Add, Sub, Mul, Neg, Pow, Exp };
  Kind kind = Kind::Literal;
  Rational value;
  unsigned exponent = 0;
  std::vector<std::shared_ptr<const ExprNode>> args;
  std::size_t offset = 0;
};

using ExprAst = std::shared_ptr<const ExprNode>;

// expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := '-' factor | base ('^' natural)?;
// base := rational | 'v' | 'theta' | 'exp' '(' expr ')' | '(' expr ')'
ExprAst parse(std::string_view text);
std::string to_string(const ExprAst& ast);
bool contains_exp(const ExprAst& ast);
double evaluate_ast(const ExprAst& ast, double v, double theta);
// Bound on |ast - expand(ast, order)| at (v, theta) from a majorant series.
double truncation_tail_bound(const ExprAst& ast, unsigned order, double v, double theta);

inline constexpr unsigned kDefaultOrder = 12;

struct ExpandedGerm {
  PuiseuxPoly poly;
  unsigned truncation_order = kDefaultOrder;
  bool exact = true;

  Certification certification() const {
    return exact ? Certification::exact_result() : Certification::up_to(truncation_order);
  }
  Precision precision() const {
    return exact ? Precision::exact() : Precision::total_degree(Rational(truncation_order));
  }
};

// Taylor polynomial of total degree <= order. Expressions without exp are
// expanded completely and stay exact.
ExpandedGerm expand(const ExprAst& ast, unsigned order = kDefaultOrder);
// Drops the constant and pure-theta terms and checks that a mixed term remains.
ExpandedGerm normalize(const ExpandedGerm& g);
ExpandedGerm load_germ(std::string_view text, unsigned order = kDefaultOrder);

}  // namespace nc
