#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "newton_critic/error.hpp"
#include "newton_critic/rational.hpp"

namespace nc {

namespace detail {
template <class T>
bool coeff_is_zero(const T& x) {
  return is_zero(x);
}
}  // namespace detail

// Dense univariate polynomial over an exact field T. Coefficients are stored
// in ascending degree order with no trailing zeros.
template <class T>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UPoly constant(const T& a) { return UPoly(std::vector<T>{a}); }
  static UPoly monomial(const T& a, std::size_t k) {
    std::vector<T> c(k + 1, T(0));
    c[k] = a;
    return UPoly(std::move(c));
  }
  static UPoly identity() { return monomial(T(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& leading() const { return c_.back(); }
  const std::vector<T>& coeffs() const { return c_; }

  T evaluate(const T& x) const {
    T acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  UPoly derivative() const {
    if (c_.size() <= 1) return UPoly();
    std::vector<T> d(c_.size() - 1, T(0));
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return UPoly(std::move(d));
  }

  UPoly monic() const {
    if (c_.empty()) return *this;
    T inv = T(1) / c_.back();
    std::vector<T> c(c_.size(), T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i] * inv;
    return UPoly(std::move(c));
  }

  UPoly operator-() const {
    std::vector<T> c(c_.size(), T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
    return UPoly(std::move(c));
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
    return UPoly(std::move(c));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::coeff_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(c));
  }
  friend UPoly operator*(const T& s, const UPoly& a) {
    std::vector<T> c(a.c_.size(), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = s * a.c_[i];
    return UPoly(std::move(c));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!detail::coeff_is_zero(a.c_[i] - b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && detail::coeff_is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

using QPoly = UPoly<Rational>;

template <class T>
std::pair<UPoly<T>, UPoly<T>> divmod(const UPoly<T>& a, const UPoly<T>& b) {
  if (b.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {UPoly<T>(), a};
  std::vector<T> r = a.coeffs();
  std::vector<T> q(a.size() - b.size() + 1, T(0));
  T inv = T(1) / b.leading();
  const int db = b.degree();
  for (int k = a.degree() - db; k >= 0; --k) {
    T f = r[k + db] * inv;
    q[k] = f;
    if (is_zero(f)) continue;
    for (int j = 0; j <= db; ++j) r[k + j] = r[k + j] - f * b.coeffs()[j];
    r[k + db] = T(0);
  }
  r.resize(static_cast<std::size_t>(db));
  return {UPoly<T>(std::move(q)), UPoly<T>(std::move(r))};
}

template <class T>
UPoly<T> operator%(const UPoly<T>& a, const UPoly<T>& b) {
  return divmod(a, b).second;
}

template <class T>
UPoly<T> exact_quotient(const UPoly<T>& a, const UPoly<T>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) fail(ErrorCode::InvariantViolation, "inexact polynomial division");
  return q;
}

// Monic greatest common divisor; gcd(0, 0) = 0.
template <class T>
UPoly<T> gcd(UPoly<T> a, UPoly<T> b) {
  while (!b.is_zero()) {
    UPoly<T> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class T>
UPoly<T> pow(const UPoly<T>& f, unsigned e) {
  UPoly<T> result = UPoly<T>::constant(T(1));
  UPoly<T> base = f;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

// f(g(x))
template <class T>
UPoly<T> compose(const UPoly<T>& f, const UPoly<T>& g) {
  UPoly<T> acc;
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * g + UPoly<T>::constant(f.coeffs()[i]);
  return acc;
}

// f(x + a)
template <class T>
UPoly<T> taylor_shift(const UPoly<T>& f, const T& a) {
  std::vector<T> c = f.coeffs();
  const std::size_t n = c.size();
  if (is_zero(a)) return f;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] = c[j - 1] + a * c[j];
  return UPoly<T>(std::move(c));
}

// f(s * x)
template <class T>
UPoly<T> scale_variable(const UPoly<T>& f, const T& s) {
  std::vector<T> c = f.coeffs();
  T p(1);
  for (auto& ci : c) {
    ci = ci * p;
    p = p * s;
  }
  return UPoly<T>(std::move(c));
}

// x^n f(1/x) for n = deg f
template <class T>
UPoly<T> reverse(const UPoly<T>& f) {
  std::vector<T> c = f.coeffs();
  std::reverse(c.begin(), c.end());
  return UPoly<T>(std::move(c));
}

// Yun's algorithm. Entry i holds the monic factor of multiplicity i + 1.
template <class T>
std::vector<UPoly<T>> square_free_decomposition(const UPoly<T>& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "square-free decomposition of zero");
  std::vector<UPoly<T>> out;
  if (f.degree() == 0) return out;
  UPoly<T> fp = f.derivative();
  UPoly<T> a0 = gcd(f, fp);
  UPoly<T> b = exact_quotient(f.monic(), a0);
  UPoly<T> c = exact_quotient(fp.monic(), a0);
  T scale = fp.leading() / f.leading();
  c = scale * c;
  UPoly<T> d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly<T> a = gcd(b, d);
    out.push_back(a);
    b = exact_quotient(b, a);
    c = exact_quotient(d, a);
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

template <class T>
UPoly<T> square_free_part(const UPoly<T>& f) {
  if (f.degree() <= 0) return f.is_zero() ? f : UPoly<T>::constant(T(1));
  return exact_quotient(f.monic(), gcd(f, f.derivative()));
}

template <class T>
unsigned sign_variations(const UPoly<T>& f) {
  unsigned v = 0;
  int last = 0;
  for (const auto& c : f.coeffs()) {
    int s = sign(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

// Resultant lc(a)^deg(b) * prod over roots x of a of b(x).
template <class T>
T resultant(UPoly<T> a, UPoly<T> b) {
  if (a.is_zero() || b.is_zero()) return T(0);
  T acc(1);
  for (;;) {
    if (a.degree() == 0) {
      T p(1);
      for (int i = 0; i < b.degree(); ++i) p = p * a.leading();
      return acc * p;
    }
    if (b.degree() == 0) {
      T p(1);
      for (int i = 0; i < a.degree(); ++i) p = p * b.leading();
      return acc * p;
    }
    UPoly<T> r = b % a;
    if (r.is_zero()) return T(0);
    for (int i = 0; i < b.degree() - r.degree(); ++i) acc = acc * a.leading();
    if ((a.degree() * r.degree()) % 2 == 1) acc = -acc;
    b = std::move(a);
    a = std::move(r);
  }
}

// Upper bound on the number of real roots of f in the open interval (a, b).
template <class T>
unsigned descartes_bound(const UPoly<T>& f, const Rational& a, const Rational& b) {
  UPoly<T> g = scale_variable(taylor_shift(f, T(a)), T(Rational(b - a)));
  return sign_variations(taylor_shift(reverse(g), T(1)));
}

template <class T>
Rational abs_upper_bound(const T& x);

template <>
inline Rational abs_upper_bound<Rational>(const Rational& x) {
  return abs(x);
}

// Isolating intervals of the real roots of a square-free polynomial, in
// ascending order. Exact rational roots met during bisection come back as
// degenerate intervals; all other intervals are open and contain one root.
template <class T>
std::vector<RInterval> isolate_real_roots(const UPoly<T>& f) {
  std::vector<RInterval> out;
  if (f.degree() <= 0) return out;
  UPoly<T> m = f.monic();
  Rational bound(1);
  for (int i = 0; i < m.degree(); ++i) bound = std::max(bound, Rational(1 + abs_upper_bound(m.coeffs()[i])));
  bound = bound + 1;
  auto run = [&](const Rational& a, const Rational& b, auto&& self) -> void {
    unsigned v = descartes_bound(m, a, b);
    if (v == 0) return;
    if (v == 1) {
      out.push_back({a, b});
      return;
    }
    Rational mid = (a + b) / 2;
    self(a, mid, self);
    if (is_zero(m.evaluate(T(mid)))) out.push_back(RInterval::point(mid));
    self(mid, b, self);
  };
  run(Rational(-bound), Rational(0), run);
  if (is_zero(m.coeff(0))) out.push_back(RInterval::point(Rational(0)));
  run(Rational(0), bound, run);
  return out;
}

template <class T>
std::string poly_to_string(const UPoly<T>& f, const std::string& var = "x") {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = f.size(); i-- > 0;) {
    const T& c = f.coeffs()[i];
    if (is_zero(c)) continue;
    std::string cs = to_string(c);
    bool compound = cs.find_first_of("+-", 1) != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    if (!s.empty()) {
      if (cs[0] == '-') {
        s += " - ";
        cs = cs.substr(1);
      } else {
        s += " + ";
      }
    }
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    if (i == 0)
      s += cs;
    else if (cs == "1")
      s += mono;
    else if (cs == "-1")
      s += "-" + mono;
    else
      s += cs + "*" + mono;
  }
  return s;
}

// Rational-specific helpers.
RInterval evaluate(const QPoly& f, const RInterval& x);
QPoly primitive_part(const QPoly& f);
QPoly qpoly_from_ints(std::initializer_list<long> ascending);
std::vector<Rational> rational_roots(const QPoly& f);
QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

}  // namespace nc
