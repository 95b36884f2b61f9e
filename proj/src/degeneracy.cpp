#include "newton_critic/degeneracy.hpp"

#include <algorithm>

namespace nc {

namespace {

Rational min_weight(const PuiseuxPoly& g, const Precision& prec) {
  std::optional<Rational> w;
  for (const auto& [e, c] : g.terms()) {
    Rational x = prec.weight(e.p, e.q);
    if (!w || x < *w) w = x;
  }
  // an empty factor is zero up to its precision bound
  if (!w) return prec.bound() ? *prec.bound() : Rational(0);
  return *w;
}

PuiseuxPoly column(const PuiseuxPoly& g, const Rational& p) {
  return filter_terms(g, [&](const ExponentPair& e) { return e.p == p && e.q >= 1; });
}

}  // namespace

PuiseuxPoly cinematic_curvature(const PuiseuxPoly& g) {
  PuiseuxPoly gt = d_theta(g);
  PuiseuxPoly gtt = d_theta(gt);
  PuiseuxPoly gttt = d_theta(gtt);
  PuiseuxPoly gvt = d_v(gt);
  PuiseuxPoly gvtt = d_v(gtt);
  return gtt * gvtt - gttt * gvt;
}

PuiseuxPoly certified_curvature(const PuiseuxPoly& g, const Precision& prec) {
  if (prec.is_exact()) return cinematic_curvature(g);
  Precision ptt = prec.after_d_theta().after_d_theta();
  Precision pttt = ptt.after_d_theta();
  Precision pvt = prec.after_d_theta().after_d_v();
  Precision pvtt = ptt.after_d_v();
  PuiseuxPoly gtt = d_theta(d_theta(g));
  PuiseuxPoly gttt = d_theta(gtt);
  PuiseuxPoly gvt = d_v(d_theta(g));
  PuiseuxPoly gvtt = d_v(gtt);
  Precision a = Precision::product(ptt, min_weight(gtt, ptt), pvtt, min_weight(gvtt, pvtt));
  Precision b = Precision::product(pttt, min_weight(gttt, pttt), pvt, min_weight(gvt, pvt));
  return Precision::meet(a, b).prune(gtt * gvtt - gttt * gvt);
}

Classification classify(const ExpandedGerm& g) {
  Classification out;
  out.certification = g.certification();
  const Precision prec = g.precision();
  out.curvature = certified_curvature(g.poly, prec);
  const bool case1 = out.curvature.is_zero();

  NewtonDiagram d = reduced_diagram(g.poly);
  bool case2 = false;
  if (d.vertices.size() == 1 && d.vertices[0].q == 1 && d.vertices[0].p >= 1) {
    PuiseuxPoly tilde = column(g.poly, d.vertices[0].p);
    if (certified_curvature(tilde, prec).is_zero()) {
      case2 = true;
      out.vertex = d.vertices[0];
      out.tilde = tilde;
    }
  }

  ExtRational p = p0(g.poly);
  bool case3 = false;
  if (!p.is_infinite()) {
    Rational pmin = d.vertices.front().p;
    if (p.value() < pmin) {
      case3 = true;
      out.exponent = p.value();
    }
  }

  if (case1) out.satisfied_cases.push_back(1);
  if (case2) out.satisfied_cases.push_back(2);
  if (case3) out.satisfied_cases.push_back(3);
  if (case3)
    out.degenerate_case = 3;
  else if (case1)
    out.degenerate_case = 1;
  else if (case2)
    out.degenerate_case = 2;
  if (out.degenerate_case == 3) {
    PuiseuxPoly rest = g.poly;
    rest.erase(ExponentPair{p.value(), 0});
    out.tilde = rest;
  }
  out.verdict = out.degenerate_case ? Classification::Verdict::Degenerate
                                    : Classification::Verdict::NotStronglyDegenerate;
  return out;
}

bool geometric_sequence_test(const ExpandedGerm& g) {
  NewtonDiagram d = reduced_diagram(g.poly);
  if (d.vertices.size() != 1 || d.vertices[0].q != 1)
    fail(ErrorCode::InvalidArgument, "geometric sequence test needs a single reduced vertex (p, 1)");
  const Rational p = d.vertices[0].p;
  PuiseuxPoly col = column(g.poly, p);
  unsigned top = col.theta_degree() + 2;
  if (!g.exact) {
    Rational room = Rational(g.truncation_order) - p;
    top = sign(room) > 0 ? static_cast<unsigned>(floor_int(room).get_ui()) : 1;
  }
  std::vector<Coefficient> a(top + 1, Coefficient(0));
  for (unsigned k = 1; k <= top; ++k) a[k] = Coefficient(factorial(k)) * col.coefficient(p, k);
  if (a[1].is_zero()) return false;
  for (unsigned k = 1; k + 2 <= top; ++k)
    if (a[k] * a[k + 2] != a[k + 1] * a[k + 1]) return false;
  return true;
}

}  // namespace nc
