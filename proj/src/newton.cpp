#include "newton_critic/newton.hpp"

#include <algorithm>
#include <cmath>

namespace nc {

const Rational& ExtRational::value() const {
  if (!value_) fail(ErrorCode::InvalidArgument, "value of infinity");
  return *value_;
}

double ExtRational::to_double() const { return value_ ? value_->get_d() : HUGE_VAL; }

std::optional<std::size_t> NewtonDiagram::vertex_index(const ExponentPair& v) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == v) return i;
  return std::nullopt;
}

SupportSet taylor_support(const PuiseuxPoly& g) {
  SupportSet s;
  for (const auto& [e, c] : g.terms()) s.push_back(e);
  return s;
}

NewtonDiagram diagram(const SupportSet& s, bool reduced) {
  std::vector<ExponentPair> pts;
  for (const auto& e : s) {
    if (sign(e.p) < 0) fail(ErrorCode::InvalidArgument, "negative exponent in support");
    if (!reduced || e.q >= 1) pts.push_back(e);
  }
  if (pts.empty())
    fail(reduced ? ErrorCode::EmptyReducedSupport : ErrorCode::InvalidArgument, "empty support for Newton diagram");
  std::sort(pts.begin(), pts.end());
  // staircase of points not dominated by another point's quadrant
  std::vector<ExponentPair> stair;
  for (const auto& e : pts)
    if (stair.empty() || e.q < stair.back().q) stair.push_back(e);
  // lower convex hull with collinear points dropped
  std::vector<ExponentPair> hull;
  for (const auto& e : stair) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // b is kept only when it lies strictly below segment a-e
      Rational cross = (b.p - a.p) * (Rational(e.q) - Rational(a.q)) - (Rational(b.q) - Rational(a.q)) * (e.p - a.p);
      if (sign(cross) <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(e);
  }
  NewtonDiagram d;
  d.reduced = reduced;
  d.vertices = hull;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& l = hull[i];
    const auto& r = hull[i + 1];
    Edge e;
    e.left = l;
    e.right = r;
    e.line.a = Rational(l.q) - Rational(r.q);
    e.line.b = r.p - l.p;
    e.line.c = e.line.a * l.p + e.line.b * l.q;
    e.slope = e.line.b / e.line.a;
    d.edges.push_back(e);
  }
  return d;
}

NewtonDiagram reduced_diagram(const PuiseuxPoly& g) { return diagram(taylor_support(g), true); }

ExtRational p0(const PuiseuxPoly& g) {
  for (const auto& [e, c] : g.terms())
    if (e.q == 0) return e.p;  // terms are ordered by p first
  return ExtRational::infinity();
}

Rational vertical_distance(const Line& l, const ExtRational& p) {
  if (p.is_infinite()) return Rational(0);
  Rational x = (l.c - l.a * p.value()) / l.b;
  return sign(x) > 0 ? x : Rational(0);
}

ExtRational vertex_sup_distance(const NewtonDiagram& d, const ExponentPair& vertex, const ExtRational& p0v) {
  auto idx = d.vertex_index(vertex);
  if (!idx) fail(ErrorCode::InvalidArgument, "not a vertex of the diagram: " + to_string(vertex));
  if (p0v.is_infinite()) return Rational(0);
  const Rational& p0 = p0v.value();
  const std::size_t i = *idx;
  // tangent lines at the vertex have a/b strictly between the neighbouring edges' values
  std::optional<Rational> sigma_max;
  Rational sigma_min(0);
  if (i > 0) sigma_max = d.edges[i - 1].line.sigma();
  if (i < d.edges.size()) sigma_min = d.edges[i].line.sigma();
  Rational dp = vertex.p - p0;
  Rational value;
  if (sign(dp) > 0) {
    if (!sigma_max)
      fail(ErrorCode::UnboundedDistance,
           "vertical distance unbounded at leftmost vertex " + to_string(vertex) + " with p0 = " + to_string(p0));
    value = Rational(vertex.q) + *sigma_max * dp;
  } else {
    value = Rational(vertex.q) + sigma_min * dp;
  }
  return sign(value) > 0 ? value : Rational(0);
}

ExtRational d_gamma(const NewtonDiagram& reduced, const ExtRational& p0v) {
  ExtRational best = Rational(0);
  for (const auto& v : reduced.vertices) best = max(best, vertex_sup_distance(reduced, v, p0v));
  return best;
}

ExtRational d_gt(const NewtonDiagram& reduced, const ExponentPair& vertex, const ExtRational& p0v) {
  if (!reduced.vertex_index(vertex)) fail(ErrorCode::InvalidArgument, "not a vertex: " + to_string(vertex));
  std::optional<ExtRational> best;
  for (const auto& v : reduced.vertices) {
    if (v.p <= vertex.p) continue;
    ExtRational x = vertex_sup_distance(reduced, v, p0v);
    best = best ? max(*best, x) : x;
  }
  if (best) return *best;
  return p0v.is_infinite() ? ExtRational(Rational(0)) : ExtRational(Rational(vertex.q));
}

ExtRational d_gamma(const PuiseuxPoly& g) { return d_gamma(reduced_diagram(g), p0(g)); }

ExtRational d_gt(const PuiseuxPoly& g, const ExponentPair& vertex) { return d_gt(reduced_diagram(g), vertex, p0(g)); }

ExtRational entry_height(const NewtonDiagram& d, const Rational& x) {
  const auto& vs = d.vertices;
  if (x < vs.front().p) return ExtRational::infinity();
  if (x >= vs.back().p) return Rational(vs.back().q);
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    if (x >= vs[i].p && x <= vs[i + 1].p) {
      Rational t = (x - vs[i].p) / (vs[i + 1].p - vs[i].p);
      return Rational(Rational(vs[i].q) + t * (Rational(vs[i + 1].q) - Rational(vs[i].q)));
    }
  }
  return Rational(vs.back().q);
}

bool separates(const NewtonDiagram& d, const SupportSet& s) {
  for (const auto& e : d.edges)
    for (const auto& pt : s) {
      if (d.reduced && pt.q == 0) continue;
      if (e.line.evaluate(pt.p, pt.q) < e.line.c) return false;
    }
  return true;
}

std::string to_string(const NewtonDiagram& d) {
  std::string s = d.reduced ? "reduced diagram: " : "diagram: ";
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    if (i) s += " -- ";
    s += to_string(d.vertices[i]);
  }
  return s;
}

}  // namespace nc
