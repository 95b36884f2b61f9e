#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace nc {

using Integer = mpz_class;
using Rational = mpq_class;

inline int sign(const Rational& q) { return sgn(q); }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline int sign(const Integer& z) { return sgn(z); }

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
double to_double(const Rational& q);

Integer floor_int(const Rational& q);
Integer ceil_int(const Rational& q);
Rational pow(const Rational& base, unsigned exponent);
Rational binomial(unsigned n, unsigned k);
Rational factorial(unsigned n);
Integer lcm_int(const Integer& a, const Integer& b);

// Positive divisors of |n|; empty when n is zero or too large to factor by trial division.
std::vector<Integer> small_divisors(const Integer& n, unsigned long limit = 2000000000UL);

// Closed rational interval with exact endpoint arithmetic.
struct RInterval {
  Rational lo;
  Rational hi;

  static RInterval point(const Rational& x) { return {x, x}; }
  bool contains_zero() const { return sign(lo) <= 0 && sign(hi) >= 0; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
};

RInterval operator+(const RInterval& a, const RInterval& b);
RInterval operator-(const RInterval& a, const RInterval& b);
RInterval operator*(const RInterval& a, const RInterval& b);
RInterval operator*(const Rational& c, const RInterval& a);

}  // namespace nc
