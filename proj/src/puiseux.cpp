#include "newton_critic/puiseux.hpp"

#include <mpfr.h>

#include <cmath>
#include <vector>

namespace nc {

std::string to_string(const ExponentPair& e) { return "(" + to_string(e.p) + "," + std::to_string(e.q) + ")"; }

PuiseuxPoly PuiseuxPoly::constant(const Coefficient& c) { return monomial(c, Rational(0), 0); }

PuiseuxPoly PuiseuxPoly::monomial(const Coefficient& c, const Rational& p, unsigned q) {
  PuiseuxPoly g;
  g.add_term(c, p, q);
  return g;
}

Coefficient PuiseuxPoly::coefficient(const Rational& p, unsigned q) const {
  auto it = terms_.find(ExponentPair{p, q});
  return it == terms_.end() ? Coefficient(0) : it->second;
}

void PuiseuxPoly::add_term(const Coefficient& c, const Rational& p, unsigned q) {
  if (c.is_zero()) return;
  ExponentPair key{p, q};
  key.p.canonicalize();
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
    return;
  }
  Coefficient s = it->second + c;
  if (s.is_zero())
    terms_.erase(it);
  else
    it->second = std::move(s);
}

Integer PuiseuxPoly::denominator() const {
  Integer m = 1;
  for (const auto& [e, c] : terms_) m = lcm_int(m, e.p.get_den());
  return m;
}

FieldPtr PuiseuxPoly::field() const {
  FieldPtr k;
  for (const auto& [e, c] : terms_) k = common_field(k, c.field());
  return k;
}

unsigned PuiseuxPoly::theta_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.q);
  return d;
}

std::string PuiseuxPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  // display by increasing total degree then v-exponent
  std::vector<const Terms::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    Rational da = a->first.p + a->first.q, db = b->first.p + b->first.q;
    if (da != db) return da < db;
    return a->first.q > b->first.q;
  });
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    std::string cs = c.to_string();
    bool compound = cs.find_first_of("+-", 1) != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    bool neg = cs[0] == '-';
    if (neg) cs = cs.substr(1);
    std::string mono;
    if (sign(e.p) != 0) {
      mono = "v";
      if (e.p != 1) mono += e.p.get_den() == 1 ? "^" + nc::to_string(e.p) : "^(" + nc::to_string(e.p) + ")";
    }
    if (e.q > 0) {
      if (!mono.empty()) mono += "*";
      mono += "theta";
      if (e.q > 1) mono += "^" + std::to_string(e.q);
    }
    std::string term;
    if (mono.empty())
      term = cs;
    else if (cs == "1")
      term = mono;
    else
      term = cs + "*" + mono;
    if (s.empty())
      s = neg ? "-" + term : term;
    else
      s += (neg ? " - " : " + ") + term;
  }
  return s;
}

PuiseuxPoly operator+(const PuiseuxPoly& a, const PuiseuxPoly& b) {
  PuiseuxPoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(c, e.p, e.q);
  return r;
}

PuiseuxPoly operator-(const PuiseuxPoly& a, const PuiseuxPoly& b) { return a + (-b); }

PuiseuxPoly PuiseuxPoly::operator-() const {
  PuiseuxPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

PuiseuxPoly operator*(const PuiseuxPoly& a, const PuiseuxPoly& b) {
  PuiseuxPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ca * cb, ea.p + eb.p, ea.q + eb.q);
  return r;
}

PuiseuxPoly operator*(const Coefficient& c, const PuiseuxPoly& a) {
  if (c.is_zero()) return PuiseuxPoly();
  PuiseuxPoly r = a;
  for (auto& [e, x] : r.terms_) x = c * x;
  return r;
}

bool operator==(const PuiseuxPoly& a, const PuiseuxPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
    if (ia->first != ib->first || ia->second != ib->second) return false;
  return true;
}

bool Precision::certifies(const Rational& p, unsigned q) const { return !bound_ || weight(p, q) <= *bound_; }

Precision Precision::after_shift(const Rational& w) const {
  if (!bound_ || w >= mu_) return *this;
  return Precision(w, Rational(*bound_ * w / mu_));
}

Precision Precision::after_rescale(unsigned m) const {
  if (!bound_) return *this;
  return Precision(Rational(mu_ * m), Rational(*bound_ * m));
}

Precision Precision::capped(const Rational& order) const {
  if (bound_ && *bound_ <= order) return *this;
  return Precision(mu_, order);
}

Precision Precision::after_d_theta() const {
  if (!bound_) return *this;
  return Precision(mu_, Rational(*bound_ - mu_));
}

Precision Precision::after_d_v() const {
  if (!bound_) return *this;
  return Precision(mu_, Rational(*bound_ - 1));
}

Precision Precision::product(const Precision& a, const Rational& min_weight_a, const Precision& b,
                             const Rational& min_weight_b) {
  if (!a.bound_ && !b.bound_) return a;
  const Rational& mu = a.bound_ ? a.mu_ : b.mu_;
  std::optional<Rational> bound;
  if (a.bound_) bound = *a.bound_ + min_weight_b;
  if (b.bound_) {
    Rational other = *b.bound_ + min_weight_a;
    if (!bound || other < *bound) bound = other;
  }
  return Precision(mu, bound);
}

Precision Precision::meet(const Precision& a, const Precision& b) {
  if (!a.bound_) return b;
  if (!b.bound_) return a;
  return *a.bound_ <= *b.bound_ ? a : b;
}

PuiseuxPoly Precision::prune(const PuiseuxPoly& g) const {
  if (!bound_) return g;
  return filter_terms(g, [this](const ExponentPair& e) { return certifies(e.p, e.q); });
}

std::string Precision::describe() const {
  if (!bound_) return "exact";
  return "p + " + nc::to_string(mu_) + "*q <= " + nc::to_string(*bound_);
}

PuiseuxPoly pow(const PuiseuxPoly& g, unsigned n) {
  PuiseuxPoly r = PuiseuxPoly::constant(Coefficient(1)), b = g;
  while (n) {
    if (n & 1U) r = r * b;
    n >>= 1U;
    if (n) b = b * b;
  }
  return r;
}

PuiseuxPoly d_theta(const PuiseuxPoly& g) {
  PuiseuxPoly r;
  for (const auto& [e, c] : g.terms())
    if (e.q > 0) r.add_term(c * Coefficient(static_cast<long>(e.q)), e.p, e.q - 1);
  return r;
}

PuiseuxPoly d_v(const PuiseuxPoly& g) {
  PuiseuxPoly r;
  for (const auto& [e, c] : g.terms())
    if (sign(e.p) > 0) r.add_term(c * Coefficient(e.p), Rational(e.p - 1), e.q);
  return r;
}

PuiseuxPoly substitute_theta_shift(const PuiseuxPoly& g, const Coefficient& r, const Rational& w) {
  if (r.is_zero()) return g;
  if (sign(w) < 0) fail(ErrorCode::InvalidArgument, "shift exponent must be nonnegative");
  std::vector<Coefficient> rp{Coefficient(1)};
  PuiseuxPoly out;
  for (const auto& [e, c] : g.terms()) {
    while (rp.size() <= e.q) rp.push_back(rp.back() * r);
    for (unsigned k = 0; k <= e.q; ++k) {
      Coefficient t = c * Coefficient(binomial(e.q, k)) * rp[e.q - k];
      out.add_term(t, Rational(e.p + w * (e.q - k)), k);
    }
  }
  return out;
}

PuiseuxPoly shift_theta(const PuiseuxPoly& g, const PuiseuxPoly& h,
                        const std::function<bool(const ExponentPair&)>& keep) {
  for (const auto& [e, c] : h.terms())
    if (e.q != 0) fail(ErrorCode::InvalidArgument, "shift must not depend on theta");
  if (h.is_zero()) return keep ? filter_terms(g, keep) : g;
  auto prune = [&](const PuiseuxPoly& x) { return keep ? filter_terms(x, keep) : x; };
  // Powers of h are needed up to the theta-degree of g; (theta+h)^q = sum_k C(q,k) theta^k h^(q-k).
  const unsigned qmax = g.theta_degree();
  std::vector<PuiseuxPoly> hp{PuiseuxPoly::constant(Coefficient(1))};
  for (unsigned i = 1; i <= qmax; ++i) hp.push_back(hp.back() * h);
  PuiseuxPoly out;
  for (const auto& [e, c] : g.terms()) {
    for (unsigned k = 0; k <= e.q; ++k) {
      Coefficient f = c * Coefficient(binomial(e.q, k));
      for (const auto& [eh, ch] : hp[e.q - k].terms()) {
        ExponentPair key{Rational(e.p + eh.p), k};
        if (keep && !keep(key)) continue;
        out.add_term(f * ch, key.p, k);
      }
    }
  }
  return prune(out);
}

PuiseuxPoly rescale_v(const PuiseuxPoly& g, unsigned m) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "rescale factor must be positive");
  PuiseuxPoly r;
  for (const auto& [e, c] : g.terms()) r.add_term(c, Rational(e.p * m), e.q);
  return r;
}

PuiseuxPoly map_coefficients(const PuiseuxPoly& g, const std::function<Coefficient(const Coefficient&)>& f) {
  PuiseuxPoly r;
  for (const auto& [e, c] : g.terms()) r.add_term(f(c), e.p, e.q);
  return r;
}

PuiseuxPoly filter_terms(const PuiseuxPoly& g, const std::function<bool(const ExponentPair&)>& keep) {
  PuiseuxPoly r;
  for (const auto& [e, c] : g.terms())
    if (keep(e)) r.add_term(c, e.p, e.q);
  return r;
}

PuiseuxPoly theta_column(const PuiseuxPoly& g, unsigned q) {
  PuiseuxPoly r;
  for (const auto& [e, c] : g.terms())
    if (e.q == q) r.add_term(c, e.p, 0);
  return r;
}

std::string Certification::to_string() const { return exact ? "Exact" : "UpToOrder(" + std::to_string(order) + ")"; }

ZeroTest is_identically_zero(const PuiseuxPoly& g, const Certification& origin) {
  return {g.is_zero(), origin};
}

double evaluate_numeric(const PuiseuxPoly& g, double v, double theta) {
  if (v < 0 && g.denominator() > 1) fail(ErrorCode::NegativeBase, "negative v with fractional exponents");
  return CompiledGerm(g)(v, theta);
}

double evaluate_precise(const PuiseuxPoly& g, double v, double theta) {
  if (v < 0 && g.denominator() > 1) fail(ErrorCode::NegativeBase, "negative v with fractional exponents");
  constexpr mpfr_prec_t kBits = 200;
  mpfr_t acc, term, x, y, c;
  mpfr_inits2(kBits, acc, term, x, y, c, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc, 1);
  for (const auto& [e, coef] : g.terms()) {
    RInterval enc = coef.enclosure();
    Rational mid = enc.midpoint();
    mpfr_set_q(c, mid.get_mpq_t(), MPFR_RNDN);
    if (sign(e.p) == 0) {
      mpfr_set_ui(x, 1, MPFR_RNDN);
    } else if (e.p.get_den() == 1) {
      mpfr_set_d(x, v, MPFR_RNDN);
      mpfr_pow_ui(x, x, e.p.get_num().get_ui(), MPFR_RNDN);
    } else {
      mpfr_set_d(x, v, MPFR_RNDN);
      mpfr_set_q(y, e.p.get_mpq_t(), MPFR_RNDN);
      mpfr_pow(x, x, y, MPFR_RNDN);
    }
    mpfr_set_d(y, theta, MPFR_RNDN);
    mpfr_pow_ui(y, y, e.q, MPFR_RNDN);
    mpfr_mul(term, c, x, MPFR_RNDN);
    mpfr_mul(term, term, y, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
  }
  double out = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clears(acc, term, x, y, c, static_cast<mpfr_ptr>(nullptr));
  return out;
}

CompiledGerm::CompiledGerm(const PuiseuxPoly& g) {
  for (const auto& [e, c] : g.terms()) {
    Term t{c.to_double(), e.p.get_d(), -1, e.q};
    if (e.p.get_den() == 1)
      t.ip = static_cast<int>(e.p.get_num().get_si());
    else
      fractional_ = true;
    terms_.push_back(t);
  }
}

double CompiledGerm::operator()(double v, double theta) const {
  double s = 0;
  for (const auto& t : terms_) {
    double vp = t.ip >= 0 ? std::pow(v, t.ip) : std::pow(v, t.p);
    double tp = 1;
    for (unsigned i = 0; i < t.q; ++i) tp *= theta;
    s += t.c * vp * tp;
  }
  return s;
}

}  // namespace nc
