#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "newton_critic/rational.hpp"
#include "newton_critic/upoly.hpp"

namespace nc {

// A real algebraic number: a square-free rational polynomial together with an
// isolating interval. A degenerate interval means the value is that rational.
class AlgebraicReal {
 public:
  AlgebraicReal() : AlgebraicReal(Rational(0)) {}
  explicit AlgebraicReal(const Rational& q);
  // poly need only be square-free with exactly one root in the open interval (lo, hi)
  // and no root at either endpoint.
  static AlgebraicReal from_isolating(const QPoly& poly, const Rational& lo, const Rational& hi);

  bool is_rational() const { return lo_ == hi_; }
  const Rational& rational_value() const;
  const QPoly& poly() const { return poly_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }

  void refine();
  void refine_to(const Rational& width);
  double to_double() const;
  int sign() const;
  std::string to_string() const;

  friend int compare(const AlgebraicReal& a, const AlgebraicReal& b);

 private:
  QPoly poly_;
  Rational lo_, hi_;
};

inline bool operator<(const AlgebraicReal& a, const AlgebraicReal& b) { return compare(a, b) < 0; }
inline bool operator==(const AlgebraicReal& a, const AlgebraicReal& b) { return compare(a, b) == 0; }

class Coefficient;

struct RealRoot {
  AlgebraicReal value;
  unsigned multiplicity = 1;
  // Set when the root is an element of the polynomial's own coefficient field.
  std::shared_ptr<const Coefficient> in_field;
};

// Real roots of a nonzero rational polynomial in ascending order.
std::vector<RealRoot> real_roots(const QPoly& f);

// The real field Q(alpha) for an irrational real algebraic alpha. The defining
// polynomial is square-free but need not be irreducible.
class NumberField {
 public:
  explicit NumberField(AlgebraicReal alpha);

  const AlgebraicReal& generator() const { return alpha_; }
  const QPoly& modulus() const { return alpha_.poly(); }
  int degree() const { return alpha_.poly().degree(); }
  // Tight enclosure of the generator, fixed at construction.
  const AlgebraicReal& tight() const { return tight_; }
  std::string describe() const;

 private:
  AlgebraicReal alpha_;
  AlgebraicReal tight_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Element of Q or of a NumberField. Values representable as rationals never
// carry a field, so rationals combine freely with every field.
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(long v) : q_(v) {}  // NOLINT
  Coefficient(int v) : q_(v) {}  // NOLINT
  Coefficient(const Rational& q) : q_(q) {}  // NOLINT
  Coefficient(FieldPtr field, const QPoly& rep);
  static Coefficient generator(const FieldPtr& field);

  bool is_rational() const { return field_ == nullptr; }
  const Rational& rational_value() const { return q_; }
  const FieldPtr& field() const { return field_; }
  QPoly rep() const { return field_ ? rep_ : QPoly::constant(q_); }

  bool is_zero() const;
  int sign() const;
  RInterval enclosure() const;
  double to_double() const;
  Coefficient inverse() const;
  Rational abs_upper_bound() const;
  std::string to_string() const;

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator/(const Coefficient& a, const Coefficient& b);
  Coefficient operator-() const;
  friend bool operator==(const Coefficient& a, const Coefficient& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

 private:
  FieldPtr field_;
  QPoly rep_;
  Rational q_;
};

inline bool is_zero(const Coefficient& c) { return c.is_zero(); }
inline int sign(const Coefficient& c) { return c.sign(); }
inline std::string to_string(const Coefficient& c) { return c.to_string(); }

template <>
inline Rational abs_upper_bound<Coefficient>(const Coefficient& x) {
  return x.abs_upper_bound();
}

// The common field of two coefficients; throws IncompatibleFields.
FieldPtr common_field(const FieldPtr& a, const FieldPtr& b);

using KPoly = UPoly<Coefficient>;

KPoly to_kpoly(const QPoly& f);
FieldPtr field_of(const KPoly& f);

// Real roots of a nonzero polynomial over Q or a real number field, ascending.
std::vector<RealRoot> real_roots(const KPoly& f);

// Q-polynomial vanishing at every root of f (norm of f down to Q).
QPoly norm_to_q(const KPoly& f);

// Image of base field K inside a larger field L = K(beta).
struct Adjunction {
  FieldPtr field;
  Coefficient beta;
  Coefficient alpha_image;  // image of K's generator; unused when K = Q

  Coefficient lift(const Coefficient& c) const;
};

inline constexpr int kMaxExtensionDegree = 64;

// Smallest real field containing K and beta, via a primitive element.
Adjunction adjoin(const FieldPtr& base, const AlgebraicReal& beta, int max_degree = kMaxExtensionDegree);

}  // namespace nc
