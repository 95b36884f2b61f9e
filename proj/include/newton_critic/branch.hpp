#pragma once

#include "newton_critic/puiseux.hpp"

namespace nc {

struct BranchSeries {
  PuiseuxPoly h;        // theta-free, sum of r_n v^{w_n}
  Rational order;       // Q(v, h(v)) has no v-exponent <= order
  bool exact = false;   // Q(v, h(v)) vanishes identically
  Rational theta_exponent;  // v-exponent of the theta-coefficient of Q(v, theta + h)
};

// The unique root theta = h(v) of Q with leading term r v^m, assuming that
// root of the edge polynomial is simple. Q must be known exactly for all
// terms that can influence exponents <= order.
BranchSeries newton_puiseux_root(const PuiseuxPoly& q, const Coefficient& r, const Rational& m,
                                 const Rational& order);

}  // namespace nc
