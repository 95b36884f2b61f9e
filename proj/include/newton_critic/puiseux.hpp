#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "newton_critic/algebraic.hpp"
#include "newton_critic/rational.hpp"

namespace nc {

struct ExponentPair {
  Rational p;
  unsigned q = 0;
};

inline bool operator<(const ExponentPair& a, const ExponentPair& b) {
  int c = cmp(a.p, b.p);
  return c < 0 || (c == 0 && a.q < b.q);
}
inline bool operator==(const ExponentPair& a, const ExponentPair& b) { return a.p == b.p && a.q == b.q; }
inline bool operator!=(const ExponentPair& a, const ExponentPair& b) { return !(a == b); }

std::string to_string(const ExponentPair& e);

// Finite sum of c * v^p * theta^q, p >= 0 rational, q >= 0 integer.
class PuiseuxPoly {
 public:
  using Terms = std::map<ExponentPair, Coefficient>;

  PuiseuxPoly() = default;
  static PuiseuxPoly constant(const Coefficient& c);
  static PuiseuxPoly monomial(const Coefficient& c, const Rational& p, unsigned q);
  static PuiseuxPoly v() { return monomial(Coefficient(1), Rational(1), 0); }
  static PuiseuxPoly theta() { return monomial(Coefficient(1), Rational(0), 1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Coefficient coefficient(const Rational& p, unsigned q) const;
  void add_term(const Coefficient& c, const Rational& p, unsigned q);
  void erase(const ExponentPair& e) { terms_.erase(e); }

  // Common denominator M of the v-exponents.
  Integer denominator() const;
  FieldPtr field() const;
  unsigned theta_degree() const;
  std::string to_string() const;

  friend PuiseuxPoly operator+(const PuiseuxPoly& a, const PuiseuxPoly& b);
  friend PuiseuxPoly operator-(const PuiseuxPoly& a, const PuiseuxPoly& b);
  friend PuiseuxPoly operator*(const PuiseuxPoly& a, const PuiseuxPoly& b);
  friend PuiseuxPoly operator*(const Coefficient& c, const PuiseuxPoly& a);
  PuiseuxPoly operator-() const;
  friend bool operator==(const PuiseuxPoly& a, const PuiseuxPoly& b);
  friend bool operator!=(const PuiseuxPoly& a, const PuiseuxPoly& b) { return !(a == b); }

 private:
  Terms terms_;
};

// Monomials of a working germ that are known exactly: those with
// p + mu*q <= bound. An absent bound means every monomial is exact.
class Precision {
 public:
  static Precision exact() { return Precision(); }
  static Precision total_degree(const Rational& order) { return Precision(Rational(1), order); }

  bool is_exact() const { return !bound_.has_value(); }
  const Rational& theta_weight() const { return mu_; }
  const std::optional<Rational>& bound() const { return bound_; }
  bool certifies(const Rational& p, unsigned q) const;
  Rational weight(const Rational& p, unsigned q) const { return p + mu_ * q; }

  // After theta -> theta + h(v) where the smallest v-exponent in h is w.
  Precision after_shift(const Rational& w) const;
  Precision after_rescale(unsigned m) const;
  // Errors of order v^{> order} were introduced.
  Precision capped(const Rational& order) const;
  Precision after_d_theta() const;
  Precision after_d_v() const;
  // Precision of a*b given the smallest weights present in each factor.
  static Precision product(const Precision& a, const Rational& min_weight_a, const Precision& b,
                           const Rational& min_weight_b);
  static Precision meet(const Precision& a, const Precision& b);

  PuiseuxPoly prune(const PuiseuxPoly& g) const;
  std::string describe() const;

 private:
  Precision() : mu_(1) {}
  Precision(Rational mu, std::optional<Rational> bound) : mu_(std::move(mu)), bound_(std::move(bound)) {}
  Rational mu_;
  std::optional<Rational> bound_;
};

inline std::ostream& operator<<(std::ostream& os, const PuiseuxPoly& g) { return os << g.to_string(); }

PuiseuxPoly pow(const PuiseuxPoly& g, unsigned n);
PuiseuxPoly d_theta(const PuiseuxPoly& g);
PuiseuxPoly d_v(const PuiseuxPoly& g);
// g(v, theta + r v^w)
PuiseuxPoly substitute_theta_shift(const PuiseuxPoly& g, const Coefficient& r, const Rational& w);
// g(v, theta + h(v)); h must not involve theta. Terms rejected by keep are dropped early.
PuiseuxPoly shift_theta(const PuiseuxPoly& g, const PuiseuxPoly& h,
                        const std::function<bool(const ExponentPair&)>& keep = nullptr);
// v -> v^m
PuiseuxPoly rescale_v(const PuiseuxPoly& g, unsigned m);
PuiseuxPoly map_coefficients(const PuiseuxPoly& g, const std::function<Coefficient(const Coefficient&)>& f);
PuiseuxPoly filter_terms(const PuiseuxPoly& g, const std::function<bool(const ExponentPair&)>& keep);
// Coefficient of theta^q as a polynomial in v (terms with that q only).
PuiseuxPoly theta_column(const PuiseuxPoly& g, unsigned q);

struct Certification {
  bool exact = true;
  unsigned order = 0;

  static Certification exact_result() { return {true, 0}; }
  static Certification up_to(unsigned t) { return {false, t}; }
  std::string to_string() const;
};

struct ZeroTest {
  bool zero = false;
  Certification certainty;
};

ZeroTest is_identically_zero(const PuiseuxPoly& g, const Certification& origin);

double evaluate_numeric(const PuiseuxPoly& g, double v, double theta);
// Evaluation carried out in 200-bit floating point before rounding.
double evaluate_precise(const PuiseuxPoly& g, double v, double theta);

// Flattened double-precision form for repeated evaluation.
class CompiledGerm {
 public:
  explicit CompiledGerm(const PuiseuxPoly& g);
  double operator()(double v, double theta) const;
  bool fractional() const { return fractional_; }

 private:
  struct Term {
    double c;
    double p;
    int ip;
    unsigned q;
  };
  std::vector<Term> terms_;
  bool fractional_ = false;
};

}  // namespace nc
