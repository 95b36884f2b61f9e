#include "newton_critic/algebraic.hpp"

#include <algorithm>
#include <sstream>

namespace nc {

namespace {

const Rational kTightWidth = Rational(1, Integer(1) << 128);

int sign_at(const QPoly& f, const Rational& x) { return sign(f.evaluate(x)); }

// s*a + t*b = g with g monic.
void xgcd(const QPoly& a, const QPoly& b, QPoly& g, QPoly& s, QPoly& t) {
  QPoly r0 = a, r1 = b, s0 = QPoly::constant(1), s1, t0, t1 = QPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  Rational inv = 1 / r0.leading();
  g = inv * r0;
  s = inv * s0;
  t = inv * t0;
}

QPoly linear(const Rational& root) { return QPoly(std::vector<Rational>{Rational(-root), Rational(1)}); }

bool odd(unsigned v) { return (v & 1U) != 0; }

}  // namespace

AlgebraicReal::AlgebraicReal(const Rational& q) : poly_(linear(q)), lo_(q), hi_(q) {}

AlgebraicReal AlgebraicReal::from_isolating(const QPoly& poly, const Rational& lo, const Rational& hi) {
  if (poly.degree() < 1) fail(ErrorCode::InvalidArgument, "algebraic number needs a nonconstant polynomial");
  if (lo == hi) {
    if (!is_zero(poly.evaluate(lo))) fail(ErrorCode::InvalidArgument, "degenerate interval is not a root");
    return AlgebraicReal(lo);
  }
  QPoly p = primitive_part(square_free_part(poly));
  for (const auto& r : rational_roots(p)) {
    if (lo < r && r < hi) return AlgebraicReal(r);
    p = exact_quotient(p, linear(r));
  }
  if (p.degree() < 1 || sign_at(p, lo) == 0 || sign_at(p, hi) == 0 || !odd(descartes_bound(p, lo, hi)))
    fail(ErrorCode::InvalidArgument, "interval does not isolate a root");
  AlgebraicReal a;
  a.poly_ = primitive_part(p);
  a.lo_ = lo;
  a.hi_ = hi;
  if (a.poly_.degree() == 1) return AlgebraicReal(Rational(-a.poly_.coeff(0) / a.poly_.coeff(1)));
  return a;
}

const Rational& AlgebraicReal::rational_value() const {
  if (!is_rational()) fail(ErrorCode::InvalidArgument, "algebraic number is irrational");
  return lo_;
}

void AlgebraicReal::refine() {
  if (is_rational()) return;
  Rational mid = (lo_ + hi_) / 2;
  int sm = sign_at(poly_, mid);
  if (sm == 0) {
    *this = AlgebraicReal(mid);
    return;
  }
  if (sign_at(poly_, lo_) != sm)
    hi_ = mid;
  else
    lo_ = mid;
}

void AlgebraicReal::refine_to(const Rational& width) {
  while (!is_rational() && hi_ - lo_ > width) refine();
}

double AlgebraicReal::to_double() const {
  if (is_rational()) return lo_.get_d();
  AlgebraicReal c = *this;
  Rational scale = std::max(Rational(1), Rational(abs(lo_)));
  c.refine_to(scale / Rational(Integer(1) << 64));
  return Rational((c.lo_ + c.hi_) / 2).get_d();
}

int AlgebraicReal::sign() const {
  if (is_rational()) return nc::sign(lo_);
  AlgebraicReal c = *this;
  for (;;) {
    if (nc::sign(c.lo_) >= 0) return 1;
    if (nc::sign(c.hi_) <= 0) return -1;
    c.refine();
    if (c.is_rational()) return nc::sign(c.lo_);
  }
}

std::string AlgebraicReal::to_string() const {
  if (is_rational()) return nc::to_string(lo_);
  return "root of " + poly_to_string(poly_, "x") + " in (" + nc::to_string(lo_) + ", " + nc::to_string(hi_) + ")";
}

int compare(const AlgebraicReal& a0, const AlgebraicReal& b0) {
  AlgebraicReal a = a0, b = b0;
  if (!a.is_rational() && !b.is_rational()) {
    QPoly g = gcd(a.poly_, b.poly_);
    if (g.degree() >= 1 && sign_at(g, a.lo_) != sign_at(g, a.hi_) && sign_at(g, b.lo_) != sign_at(g, b.hi_)) {
      Rational lo = std::max(a.lo_, b.lo_), hi = std::min(a.hi_, b.hi_);
      if (lo < hi && odd(descartes_bound(g, lo, hi))) return 0;
    }
  }
  for (;;) {
    if (a.is_rational() && b.is_rational()) return a.lo_ < b.lo_ ? -1 : (a.lo_ == b.lo_ ? 0 : 1);
    if (a.hi_ <= b.lo_) return -1;
    if (b.hi_ <= a.lo_) return 1;
    a.refine();
    b.refine();
  }
}

std::vector<RealRoot> real_roots(const QPoly& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  std::vector<RealRoot> out;
  auto factors = square_free_decomposition(f);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    QPoly h = primitive_part(factors[i]);
    if (h.degree() < 1) continue;
    const unsigned mult = static_cast<unsigned>(i + 1);
    for (const auto& r : rational_roots(h)) {
      out.push_back({AlgebraicReal(r), mult, nullptr});
      h = exact_quotient(h, linear(r));
    }
    for (const auto& iv : isolate_real_roots(h)) {
      if (iv.lo == iv.hi)
        out.push_back({AlgebraicReal(iv.lo), mult, nullptr});
      else
        out.push_back({AlgebraicReal::from_isolating(h, iv.lo, iv.hi), mult, nullptr});
    }
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  for (auto& r : out)
    if (r.value.is_rational()) r.in_field = std::make_shared<Coefficient>(r.value.rational_value());
  return out;
}

NumberField::NumberField(AlgebraicReal alpha) : alpha_(std::move(alpha)), tight_(alpha_) {
  if (alpha_.is_rational()) fail(ErrorCode::InvalidArgument, "number field generator must be irrational");
  tight_.refine_to(kTightWidth);
}

std::string NumberField::describe() const { return alpha_.to_string(); }

Coefficient::Coefficient(FieldPtr field, const QPoly& rep) {
  if (!field) {
    if (rep.degree() > 0) fail(ErrorCode::InvalidArgument, "nonconstant representative without a field");
    q_ = rep.coeff(0);
    return;
  }
  QPoly r = rep % field->modulus();
  if (r.degree() <= 0) {
    q_ = r.coeff(0);
    return;
  }
  field_ = std::move(field);
  rep_ = std::move(r);
}

Coefficient Coefficient::generator(const FieldPtr& field) { return Coefficient(field, QPoly::identity()); }

bool Coefficient::is_zero() const {
  if (!field_) return nc::is_zero(q_);
  QPoly g = gcd(rep_, field_->modulus());
  if (g.degree() < 1) return false;
  const auto& t = field_->tight();
  return sign_at(g, t.lo()) != sign_at(g, t.hi());
}

RInterval Coefficient::enclosure() const {
  if (!field_) return RInterval::point(q_);
  const auto& t = field_->tight();
  return evaluate(rep_, RInterval{t.lo(), t.hi()});
}

int Coefficient::sign() const {
  if (!field_) return nc::sign(q_);
  if (is_zero()) return 0;
  AlgebraicReal a = field_->tight();
  for (;;) {
    RInterval e = evaluate(rep_, RInterval{a.lo(), a.hi()});
    if (nc::sign(e.lo) > 0) return 1;
    if (nc::sign(e.hi) < 0) return -1;
    for (int i = 0; i < 16; ++i) a.refine();
    if (a.is_rational()) return nc::sign(rep_.evaluate(a.lo()));
  }
}

double Coefficient::to_double() const {
  if (!field_) return q_.get_d();
  if (is_zero()) return 0.0;
  AlgebraicReal a = field_->tight();
  for (;;) {
    RInterval e = evaluate(rep_, RInterval{a.lo(), a.hi()});
    Rational mid = e.midpoint();
    if (!e.contains_zero() && e.width() * (Integer(1) << 60) < abs(mid)) return mid.get_d();
    for (int i = 0; i < 32; ++i) a.refine();
    if (a.is_rational()) return Rational(rep_.evaluate(a.lo())).get_d();
  }
}

Coefficient Coefficient::inverse() const {
  if (!field_) {
    if (nc::is_zero(q_)) fail(ErrorCode::DivisionByZero, "division by zero");
    return Coefficient(Rational(1 / q_));
  }
  if (is_zero()) fail(ErrorCode::DivisionByZero, "division by zero");
  QPoly m = field_->modulus();
  QPoly g0 = gcd(rep_, m);
  if (g0.degree() >= 1) m = exact_quotient(m, g0);
  QPoly g, s, t;
  xgcd(rep_ % m, m, g, s, t);
  if (g.degree() != 0) fail(ErrorCode::InvariantViolation, "inverse computation failed");
  return Coefficient(field_, s);
}

Rational Coefficient::abs_upper_bound() const {
  if (!field_) return abs(q_);
  RInterval e = enclosure();
  return std::max(Rational(abs(e.lo)), Rational(abs(e.hi)));
}

std::string Coefficient::to_string() const {
  if (!field_) return nc::to_string(q_);
  return poly_to_string(rep_, "a");
}

FieldPtr common_field(const FieldPtr& a, const FieldPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (a->modulus() == b->modulus() && compare(a->generator(), b->generator()) == 0) return a;
  fail(ErrorCode::IncompatibleFields, "coefficients from different number fields");
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
  if (!a.field_ && !b.field_) return Coefficient(Rational(a.q_ + b.q_));
  return Coefficient(common_field(a.field_, b.field_), a.rep() + b.rep());
}

Coefficient operator-(const Coefficient& a, const Coefficient& b) {
  if (!a.field_ && !b.field_) return Coefficient(Rational(a.q_ - b.q_));
  return Coefficient(common_field(a.field_, b.field_), a.rep() - b.rep());
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  if (!a.field_ && !b.field_) return Coefficient(Rational(a.q_ * b.q_));
  if (!a.field_) return Coefficient(b.field_, a.q_ * b.rep_);
  if (!b.field_) return Coefficient(a.field_, b.q_ * a.rep_);
  return Coefficient(common_field(a.field_, b.field_), a.rep_ * b.rep_);
}

Coefficient operator/(const Coefficient& a, const Coefficient& b) { return a * b.inverse(); }

Coefficient Coefficient::operator-() const {
  if (!field_) return Coefficient(Rational(-q_));
  return Coefficient(field_, -rep_);
}

KPoly to_kpoly(const QPoly& f) {
  std::vector<Coefficient> c;
  c.reserve(f.size());
  for (const auto& x : f.coeffs()) c.emplace_back(x);
  return KPoly(std::move(c));
}

FieldPtr field_of(const KPoly& f) {
  FieldPtr k;
  for (const auto& c : f.coeffs()) k = common_field(k, c.field());
  return k;
}

QPoly norm_to_q(const KPoly& f) {
  FieldPtr k = field_of(f);
  if (!k) {
    std::vector<Rational> c;
    for (const auto& x : f.coeffs()) c.push_back(x.rational_value());
    return QPoly(std::move(c));
  }
  std::vector<QPoly> reps;
  for (const auto& x : f.coeffs()) reps.push_back(x.rep());
  QPoly m = k->modulus();
  QPoly g = m;
  for (const auto& r : reps) g = gcd(g, r);
  if (g.degree() >= 1) m = exact_quotient(m, g);
  const int d = m.degree() * f.degree();
  std::vector<Rational> xs, ys;
  for (int i = 0; i <= d; ++i) {
    Rational x(i);
    QPoly h;
    Rational p(1);
    for (const auto& r : reps) {
      h = h + p * r;
      p *= x;
    }
    xs.push_back(x);
    ys.push_back(resultant(m, h));
  }
  return interpolate(xs, ys);
}

namespace {

// Shrinks (lo, hi), which holds exactly one root of the square-free f, by
// bisection; returns true when the midpoint happened to be the root.
bool bisect_root(const KPoly& f, Rational& lo, Rational& hi) {
  Rational mid = (lo + hi) / 2;
  if (is_zero(f.evaluate(Coefficient(mid)))) {
    lo = hi = mid;
    return true;
  }
  if (odd(descartes_bound(f, lo, mid)))
    hi = mid;
  else
    lo = mid;
  return false;
}

}  // namespace

std::vector<RealRoot> real_roots(const KPoly& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  FieldPtr k = field_of(f);
  if (!k) return real_roots(norm_to_q(f));
  std::vector<RealRoot> out;
  auto factors = square_free_decomposition(f);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    KPoly h = factors[i].monic();
    if (h.degree() < 1) continue;
    const unsigned mult = static_cast<unsigned>(i + 1);
    if (h.degree() == 1) {
      Coefficient r = -h.coeff(0);
      RealRoot rr;
      rr.multiplicity = mult;
      rr.in_field = std::make_shared<Coefficient>(r);
      if (r.is_rational()) {
        rr.value = AlgebraicReal(r.rational_value());
      } else {
        QPoly n = primitive_part(square_free_part(norm_to_q(h)));
        Rational lo, hi;
        AlgebraicReal a = r.field()->tight();
        for (;;) {
          RInterval e = evaluate(r.rep(), RInterval{a.lo(), a.hi()});
          if (e.lo < e.hi && sign_at(n, e.lo) != 0 && sign_at(n, e.hi) != 0 && descartes_bound(n, e.lo, e.hi) == 1) {
            lo = e.lo;
            hi = e.hi;
            break;
          }
          for (int j = 0; j < 16; ++j) a.refine();
        }
        rr.value = AlgebraicReal::from_isolating(n, lo, hi);
      }
      out.push_back(std::move(rr));
      continue;
    }
    QPoly n = primitive_part(square_free_part(norm_to_q(h)));
    for (const auto& r : rational_roots(n)) {
      n = exact_quotient(n, linear(r));
      if (is_zero(h.evaluate(Coefficient(r)))) {
        out.push_back({AlgebraicReal(r), mult, std::make_shared<Coefficient>(r)});
        h = exact_quotient(h, to_kpoly(linear(r)));
      }
    }
    if (h.degree() < 1) continue;
    for (auto iv : isolate_real_roots(h)) {
      if (iv.lo == iv.hi) {
        out.push_back({AlgebraicReal(iv.lo), mult, std::make_shared<Coefficient>(iv.lo)});
        continue;
      }
      bool exact = false;
      while (!exact && !(sign_at(n, iv.lo) != 0 && sign_at(n, iv.hi) != 0 && descartes_bound(n, iv.lo, iv.hi) == 1))
        exact = bisect_root(h, iv.lo, iv.hi);
      if (exact)
        out.push_back({AlgebraicReal(iv.lo), mult, std::make_shared<Coefficient>(iv.lo)});
      else
        out.push_back({AlgebraicReal::from_isolating(n, iv.lo, iv.hi), mult, nullptr});
    }
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  return out;
}

Coefficient Adjunction::lift(const Coefficient& c) const {
  if (c.is_rational()) return c;
  if (c.field() == field) return c;
  Coefficient acc(0);
  const QPoly r = c.rep();
  for (std::size_t i = r.size(); i-- > 0;) acc = acc * alpha_image + Coefficient(r.coeffs()[i]);
  return acc;
}

Adjunction adjoin(const FieldPtr& base, const AlgebraicReal& beta, int max_degree) {
  if (beta.is_rational()) {
    Adjunction a{base, Coefficient(beta.rational_value()), base ? Coefficient::generator(base) : Coefficient(0)};
    return a;
  }
  if (!base) {
    if (beta.poly().degree() > max_degree)
      fail(ErrorCode::ExtensionTooLarge, "extension degree exceeds " + std::to_string(max_degree));
    auto l = std::make_shared<const NumberField>(beta);
    return {l, Coefficient::generator(l), Coefficient(0)};
  }
  const QPoly& ma = base->modulus();
  const QPoly& mb = beta.poly();
  const int d = ma.degree() * mb.degree();
  for (long t = 1; t <= 32; ++t) {
    std::vector<Rational> xs, ys;
    for (int i = 0; i <= d; ++i) {
      Rational x(i);
      QPoly sub(std::vector<Rational>{x, Rational(-t)});
      xs.push_back(x);
      ys.push_back(resultant(ma, compose(mb, sub)));
    }
    QPoly s = primitive_part(square_free_part(interpolate(xs, ys)));
    for (const auto& r : rational_roots(s)) s = exact_quotient(s, linear(r));
    if (s.degree() > max_degree)
      fail(ErrorCode::ExtensionTooLarge, "extension degree " + std::to_string(s.degree()) + " exceeds " +
                                             std::to_string(max_degree));
    if (s.degree() < 1) continue;
    AlgebraicReal ia = base->tight(), ib = beta;
    Rational lo, hi;
    for (;;) {
      lo = ia.lo() + t * ib.lo();
      hi = ia.hi() + t * ib.hi();
      if (lo < hi && sign_at(s, lo) != 0 && sign_at(s, hi) != 0 && descartes_bound(s, lo, hi) == 1) break;
      ia.refine();
      ib.refine();
    }
    auto l = std::make_shared<const NumberField>(AlgebraicReal::from_isolating(s, lo, hi));
    Coefficient gamma = Coefficient::generator(l);
    Rational inv_t(1, t);
    KPoly lin(std::vector<Coefficient>{gamma * Coefficient(inv_t), Coefficient(Rational(-inv_t))});
    KPoly g = gcd(to_kpoly(ma), compose(to_kpoly(mb), lin));
    if (g.degree() != 1) continue;
    Coefficient alpha_l = -g.coeff(0);
    Coefficient beta_l = (gamma - alpha_l) * Coefficient(inv_t);
    return {l, beta_l, alpha_l};
  }
  fail(ErrorCode::ExtensionTooLarge, "no primitive element found");
}

}  // namespace nc
