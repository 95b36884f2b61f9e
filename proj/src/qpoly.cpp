#include <algorithm>

#include "newton_critic/upoly.hpp"

namespace nc {

RInterval evaluate(const QPoly& f, const RInterval& x) {
  RInterval acc = RInterval::point(Rational(0));
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + RInterval::point(f.coeffs()[i]);
  return acc;
}

QPoly primitive_part(const QPoly& f) {
  if (f.is_zero()) return f;
  Integer den = 1, num = 0;
  for (const auto& c : f.coeffs()) den = lcm_int(den, c.get_den());
  std::vector<Rational> c(f.coeffs());
  for (auto& x : c) x *= den;
  for (const auto& x : c) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), x.get_num_mpz_t());
    num = g;
  }
  if (sign(c.back()) < 0) num = -num;
  for (auto& x : c) x /= num;
  return QPoly(std::move(c));
}

QPoly qpoly_from_ints(std::initializer_list<long> ascending) {
  std::vector<Rational> c;
  for (long v : ascending) c.emplace_back(v);
  return QPoly(std::move(c));
}

std::vector<Rational> rational_roots(const QPoly& f) {
  std::vector<Rational> roots;
  if (f.degree() <= 0) return roots;
  QPoly g = primitive_part(f);
  std::size_t k = 0;
  while (is_zero(g.coeffs()[k])) ++k;
  if (k > 0) {
    roots.emplace_back(0);
    g = QPoly(std::vector<Rational>(g.coeffs().begin() + static_cast<long>(k), g.coeffs().end()));
  }
  if (g.degree() >= 1) {
    Integer a0 = g.coeffs().front().get_num(), an = g.leading().get_num();
    auto ps = small_divisors(a0);
    auto qs = small_divisors(an);
    if (!ps.empty() && !qs.empty()) {
      for (const auto& p : ps)
        for (const auto& q : qs) {
          Integer gg;
          mpz_gcd(gg.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
          if (gg != 1) continue;
          for (int s : {1, -1}) {
            Rational cand(p * s, q);
            cand.canonicalize();
            if (is_zero(g.evaluate(cand))) roots.push_back(cand);
          }
        }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  const std::size_t n = xs.size();
  std::vector<Rational> dd(ys);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  QPoly acc;
  for (std::size_t i = n; i-- > 0;) {
    acc = acc * QPoly(std::vector<Rational>{Rational(-xs[i]), Rational(1)}) + QPoly::constant(dd[i]);
  }
  return acc;
}

}  // namespace nc
