#include "newton_critic/branch.hpp"

#include <optional>

#include "newton_critic/error.hpp"

namespace nc {
namespace {

constexpr int kMaxCorrections = 4096;

std::optional<ExponentPair> lowest_in_column(const PuiseuxPoly& g, unsigned q) {
  for (const auto& [e, c] : g.terms())
    if (e.q == q) return e;  // keys are ordered by p first
  return std::nullopt;
}

}  // namespace

BranchSeries newton_puiseux_root(const PuiseuxPoly& q, const Coefficient& r, const Rational& m,
                                 const Rational& order) {
  if (q.is_zero()) fail(ErrorCode::ZeroPolynomial, "branch of the zero polynomial");
  if (r.is_zero() || sign(m) <= 0) fail(ErrorCode::InvalidArgument, "branch needs a nonzero leading term");
  std::optional<Rational> edge_degree;
  for (const auto& [e, c] : q.terms()) {
    Rational w = e.p + m * e.q;
    if (!edge_degree || w < *edge_degree) edge_degree = w;
  }
  const Rational e = *edge_degree - m;
  const Rational limit = order > e ? order : e;
  auto keep = [&](const ExponentPair& x) { return x.p <= limit; };

  PuiseuxPoly cur = filter_terms(substitute_theta_shift(q, r, m), keep);
  const Coefficient slope_coeff = cur.coefficient(e, 1);
  if (slope_coeff.is_zero()) fail(ErrorCode::BranchNotSimple, "edge root is not simple");
  for (const auto& [x, c] : cur.terms())
    if (x.q == 0 && x.p <= *edge_degree) fail(ErrorCode::BranchNotSimple, "leading term is not a root of the edge polynomial");
  const Coefficient inv = slope_coeff.inverse();

  BranchSeries out;
  out.h = PuiseuxPoly::monomial(r, m, 0);
  out.theta_exponent = e;
  for (int step = 0;; ++step) {
    std::optional<ExponentPair> low = lowest_in_column(cur, 0);
    if (!low || low->p > order) break;
    if (step == kMaxCorrections) fail(ErrorCode::BranchNotSimple, "branch series does not converge");
    Rational w = low->p - e;
    if (w <= m) fail(ErrorCode::BranchNotSimple, "correction exponent does not increase");
    Coefficient delta = -(cur.coefficient(low->p, 0) * inv);
    out.h.add_term(delta, w, 0);
    cur = filter_terms(substitute_theta_shift(cur, delta, w), keep);
  }
  out.order = order;
  PuiseuxPoly residual = theta_column(shift_theta(q, out.h), 0);
  out.exact = residual.is_zero();
  return out;
}

}  // namespace nc
