#pragma once

#include <random>

#include "newton_critic/expr.hpp"

namespace nc::testing {

inline PuiseuxPoly germ(const char* text, unsigned order = kDefaultOrder) { return expand(parse(text), order).poly; }

// Sparse integer polynomial with the given number of monomials, degree <= max_degree.
inline PuiseuxPoly random_sparse(std::mt19937_64& rng, int terms, int max_degree, int coef = 5) {
  std::uniform_int_distribution<int> deg(0, max_degree), c(-coef, coef);
  PuiseuxPoly g;
  while (static_cast<int>(g.size()) < terms) {
    int p = deg(rng), q = deg(rng);
    if (p + q > max_degree) continue;
    int k = c(rng);
    if (k == 0) continue;
    g.add_term(Coefficient(k), Rational(p), static_cast<unsigned>(q));
  }
  return g;
}

// Random polynomial with fractional v-exponents over denominator den.
inline PuiseuxPoly random_puiseux(std::mt19937_64& rng, int terms, int den) {
  std::uniform_int_distribution<int> num(0, 3 * den), q(0, 4), c(-4, 4);
  PuiseuxPoly g;
  for (int i = 0; i < terms; ++i) {
    int k = c(rng);
    if (k == 0) continue;
    g.add_term(Coefficient(k), Rational(num(rng), den), static_cast<unsigned>(q(rng)));
  }
  return g;
}

}  // namespace nc::testing
