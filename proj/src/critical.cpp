#include "newton_critic/critical.hpp"

#include <algorithm>
#include <climits>
#include <functional>

#include "newton_critic/degeneracy.hpp"

namespace nc {

PuiseuxPoly edge_polynomial(const PuiseuxPoly& g, const Edge& edge) {
  return filter_terms(g, [&](const ExponentPair& e) {
    return e.p >= edge.left.p && e.p <= edge.right.p && edge.line.evaluate(e.p, e.q) == edge.line.c;
  });
}

EdgeKappa edge_kappa(const EdgeFrame& frame) {
  EdgeKappa out;
  out.e = frame.weighted_degree() - 2 * frame.edge.slope;
  std::vector<Coefficient> coeffs;
  const PuiseuxPoly on_edge = edge_polynomial(frame.germ, frame.edge);
  for (const auto& [e, c] : on_edge.terms()) {
    if (e.q < 2) continue;
    Coefficient k = c * Coefficient(static_cast<long>(e.q) * (e.q - 1));
    out.poly.add_term(k, e.p, e.q - 2);
    if (coeffs.size() < e.q - 1) coeffs.resize(e.q - 1, Coefficient(0));
    coeffs[e.q - 2] = coeffs[e.q - 2] + k;
  }
  if (out.poly.is_zero())
    fail(ErrorCode::NoSecondDerivativeOnEdge, "edge " + to_string(frame.edge.left) + "-" + to_string(frame.edge.right) +
                                                  " has no point with q >= 2");
  out.in_r = KPoly(std::move(coeffs));
  return out;
}

std::optional<BinomialPattern> match_binomial(const PuiseuxPoly& edge_poly) {
  if (edge_poly.is_zero()) return std::nullopt;
  const unsigned W = edge_poly.theta_degree();
  if (W < 3 || edge_poly.size() != W) return std::nullopt;
  std::optional<ExponentPair> lead, next;
  for (const auto& [e, c] : edge_poly.terms()) {
    if (e.q == W) lead = e;
    if (e.q == W - 1) next = e;
  }
  if (!lead || !next || next->p <= lead->p) return std::nullopt;
  BinomialPattern pat;
  pat.W = W;
  pat.c = edge_poly.coefficient(lead->p, W);
  pat.b = lead->p;
  pat.w = next->p - lead->p;
  pat.r = edge_poly.coefficient(next->p, W - 1) * (pat.c * Coefficient(static_cast<long>(W))).inverse();
  PuiseuxPoly expected;
  Coefficient rk(1);
  for (unsigned k = 0; k < W; ++k) {
    // theta^(W-k) (r v^w)^k
    expected.add_term(pat.c * Coefficient(binomial(W, k)) * rk, Rational(pat.b + pat.w * k), W - k);
    rk = rk * pat.r;
  }
  if (expected != edge_poly) return std::nullopt;
  return pat;
}

const char* trace_kind_name(TraceEvent::Kind kind) {
  switch (kind) {
    case TraceEvent::Kind::InitD: return "InitD";
    case TraceEvent::Kind::EdgeVisited: return "EdgeVisited";
    case TraceEvent::Kind::RootFound: return "RootFound";
    case TraceEvent::Kind::Substitution: return "Substitution";
    case TraceEvent::Kind::DUpdate: return "DUpdate";
    case TraceEvent::Kind::ScenarioTwoCollapse: return "ScenarioTwoCollapse";
    case TraceEvent::Kind::Claim54Check: return "Claim54Check";
  }
  return "?";
}

const std::string& TraceEvent::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  fail(ErrorCode::InvalidArgument, std::string("trace event ") + trace_kind_name(kind) + " has no field " + key);
}

std::string TraceEvent::to_string() const {
  std::string s = std::string(depth * 2, ' ') + trace_kind_name(kind);
  for (const auto& [k, v] : fields) s += " " + k + "=" + v;
  return s;
}

BranchSeries scenario_two_collapse(const EdgeFrame& frame, const BinomialPattern& pattern, const Rational& order) {
  PuiseuxPoly q = frame.germ;
  for (unsigned i = 0; i + 1 < pattern.W; ++i) q = d_theta(q);
  return newton_puiseux_root(q, -pattern.r, pattern.w, order);
}

namespace {

struct Work {
  PuiseuxPoly g;
  Precision prec = Precision::exact();
};

// Lexicographic (anchor q, root multiplicity) with a count of repeats.
struct Measure {
  unsigned q = UINT_MAX;
  unsigned mult = UINT_MAX;
  unsigned run = 0;
};

constexpr unsigned kMaxEqualMeasures = 3;

Line line_through(const ExponentPair& pt, const Rational& sigma) { return Line{sigma, Rational(1), sigma * pt.p + pt.q}; }

class Runner {
 public:
  Runner(const ExpandedGerm& g, const CriticalConfig& cfg)
      : cfg_(cfg), exact_input_(g.exact), order_(g.exact ? cfg.order : g.truncation_order) {
    work_.prec = g.precision();
    work_.g = work_.prec.prune(g.poly);
  }

  CriticalReport run() {
    NewtonDiagram diag = reduced_diagram(work_.g);
    D_ = resolve(work_, [&](const ExtRational& p0) { return d_gamma(diag, p0); }).first;
    emit(TraceEvent::Kind::InitD, 0, {{"value", to_string(D_)}, {"p0", p0(work_.g).to_string()}});
    for (const Edge& e : diag.edges) process_edge(work_, e.left, e, 1, false, Measure{});
    for (const auto& c : claims_) {
      TraceEvent& ev = trace_[c.index];
      bool ok = c.value <= D_;
      ev.fields.push_back({"bound", to_string(D_)});
      ev.fields.push_back({"ok", ok ? "true" : "false"});
      if (!ok) {
        if (c.p0_bounded)
          fail(ErrorCode::TruncationInsufficient, "tangent-line bound at " + to_string(c.anchor) + " depends on an unknown p0");
        fail(ErrorCode::InvariantViolation, "intermediate tangent lines at " + to_string(c.anchor) + " exceed D");
      }
    }
    CriticalReport r;
    r.D_gamma = D_;
    r.p_gamma = D_ > 2 ? D_ : Rational(2);
    r.trace = trace_;
    r.certification = exact_result_ ? Certification::exact_result() : Certification::up_to(order_);
    return r;
  }

  std::vector<TraceEvent>& trace() { return trace_; }

 private:
  struct Claim {
    std::size_t index;
    ExponentPair anchor;
    Rational value;
    bool p0_bounded;
  };

  void emit(TraceEvent::Kind kind, unsigned depth, std::vector<std::pair<std::string, std::string>> fields) {
    trace_.push_back(TraceEvent{kind, depth, std::move(fields)});
  }

  // Evaluates a distance that depends on p0. Without a certified pure
  // v-term, p0 is only known to exceed the precision bound; the answer must
  // then agree at both ends of that range (distances are monotone in p0).
  // Returns the value and whether p0 was only bounded.
  std::pair<Rational, bool> resolve(const Work& w, const std::function<ExtRational(const ExtRational&)>& fn,
                                    bool allow_upper = false) const {
    ExtRational known = p0(w.g);
    if (!known.is_infinite() || w.prec.is_exact()) return {fn(known).value(), false};
    Rational at_inf = fn(ExtRational::infinity()).value();
    Rational at_bound = fn(ExtRational(*w.prec.bound())).value();
    if (at_inf == at_bound) return {at_inf, false};
    if (allow_upper) return {at_bound, true};
    fail(ErrorCode::TruncationInsufficient,
         "p0 lies beyond the certified order " + to_string(*w.prec.bound()) + " and changes the distance");
  }

  Measure advance(const Measure& m, const ExponentPair& anchor, unsigned mult) const {
    if (!exact_input_) return m;
    Measure next{anchor.q, mult, 0};
    if (std::pair(next.q, next.mult) > std::pair(m.q, m.mult))
      fail(ErrorCode::InvariantViolation, "multiplicity measure increased at " + to_string(anchor));
    if (next.q == m.q && next.mult == m.mult) {
      next.run = m.run + 1;
      if (next.run > kMaxEqualMeasures)
        fail(ErrorCode::InvariantViolation, "multiplicity measure stalled at " + to_string(anchor) + " with multiplicity " +
                                                std::to_string(mult));
    }
    return next;
  }

  void process_edge(const Work& w, const ExponentPair& anchor, const Edge& edge, unsigned depth, bool star0,
                    const Measure& measure) {
    if (depth > cfg_.max_depth)
      fail(ErrorCode::MaxDepthExceeded, "recursion depth exceeds " + std::to_string(cfg_.max_depth));
    EdgeFrame frame{w.g, anchor, edge};
    emit(TraceEvent::Kind::EdgeVisited, depth,
         {{"anchor", to_string(anchor)},
          {"edge", to_string(edge.left) + "-" + to_string(edge.right)},
          {"slope", to_string(edge.slope)},
          {"star0", star0 ? "true" : "false"}});
    if (star0) {
      if (auto pat = match_binomial(edge_polynomial(w.g, edge))) {
        collapse(w, frame, *pat, depth, measure);
        return;
      }
    }
    EdgeKappa kappa;
    try {
      kappa = edge_kappa(frame);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSecondDerivativeOnEdge) throw;
      trace_.back().fields.push_back({"kappa", "none"});
      return;
    }
    trace_.back().fields.push_back({"kappa", poly_to_string(kappa.in_r, "r")});
    std::vector<RealRoot> roots = kappa.in_r.degree() > 0 ? real_roots(kappa.in_r) : std::vector<RealRoot>{};
    std::stable_sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
    for (const RealRoot& root : roots) {
      if (root.value.sign() == 0) continue;
      emit(TraceEvent::Kind::RootFound, depth,
           {{"r", root.value.to_string()},
            {"approx", std::to_string(root.value.to_double())},
            {"multiplicity", std::to_string(root.multiplicity)}});
      Measure next = advance(measure, anchor, root.multiplicity);
      Work s = substitute(w, root, edge.slope, depth);
      post(s, anchor, edge, depth, next);
    }
  }

  Work substitute(const Work& w, const RealRoot& root, const Rational& m, unsigned depth) {
    PuiseuxPoly g = w.g;
    Coefficient r;
    std::string field = "Q";
    if (root.value.is_rational()) {
      r = Coefficient(root.value.rational_value());
    } else if (root.in_field) {
      r = *root.in_field;
    } else {
      Adjunction adj = adjoin(g.field(), root.value);
      g = map_coefficients(g, [&](const Coefficient& c) { return adj.lift(c); });
      r = adj.beta;
    }
    if (FieldPtr k = common_field(g.field(), r.field())) field = k->describe();
    Work out;
    out.prec = w.prec.after_shift(m);
    out.g = out.prec.prune(substitute_theta_shift(g, r, m));
    emit(TraceEvent::Kind::Substitution, depth,
         {{"shift", "theta -> theta + (" + r.to_string() + ")*v^" + to_string(m)},
          {"field", field},
          {"precision", out.prec.describe()}});
    return out;
  }

  void collapse(const Work& w, const EdgeFrame& frame, const BinomialPattern& pat, unsigned depth, const Measure& measure) {
    Precision qprec = w.prec;
    for (unsigned i = 0; i + 1 < pat.W; ++i) qprec = qprec.after_d_theta();
    qprec = qprec.after_shift(pat.w);
    // d^(W-1)/dtheta^(W-1) of the pattern is c W! v^b (theta + r v^w)
    Rational target = Rational(order_) + pat.b;
    if (qprec.bound() && *qprec.bound() < target) target = *qprec.bound();
    BranchSeries h = scenario_two_collapse(frame, pat, target);
    Work out;
    out.prec = w.prec.after_shift(pat.w);
    // the computed h is only the true root up to v^(target - e) unless Q is known exactly
    if (!(h.exact && w.prec.is_exact())) {
      out.prec = out.prec.capped(Rational(target - h.theta_exponent));
      exact_result_ = false;
    }
    out.g = shift_theta(w.g, h.h, [&](const ExponentPair& x) { return out.prec.certifies(x.p, x.q); });
    emit(TraceEvent::Kind::ScenarioTwoCollapse, depth,
         {{"W", std::to_string(pat.W)},
          {"c", pat.c.to_string()},
          {"b", to_string(pat.b)},
          {"r", pat.r.to_string()},
          {"w", to_string(pat.w)},
          {"h", h.h.to_string()},
          {"series", h.exact && w.prec.is_exact() ? "exact" : "order " + to_string(h.order)},
          {"precision", out.prec.describe()}});
    post(out, frame.anchor, frame.edge, depth, measure);
  }

  void post(const Work& w, const ExponentPair& anchor, const Edge& ref, unsigned depth, const Measure& measure) {
    NewtonDiagram diag;
    try {
      diag = reduced_diagram(w.g);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyReducedSupport) throw;
      if (!w.prec.is_exact()) fail(ErrorCode::TruncationInsufficient, "no certified terms with q >= 1 remain");
      fail(ErrorCode::InvariantViolation, "reduced support vanished after substitution");
    }
    auto idx = diag.vertex_index(anchor);
    if (!idx) {
      if (!w.prec.certifies(anchor.p, anchor.q))
        fail(ErrorCode::TruncationInsufficient, "anchor " + to_string(anchor) + " lies beyond the certified order");
      fail(ErrorCode::InvariantViolation, "anchor " + to_string(anchor) + " is no longer a vertex");
    }
    for (const ExponentPair& v : diag.vertices)
      if (ref.line.evaluate(v.p, v.q) < ref.line.c)
        fail(ErrorCode::InvariantViolation, "vertex " + to_string(v) + " lies below the edge line");
    Rational cand = resolve(w, [&](const ExtRational& p0v) { return d_gt(diag, anchor, p0v); }).first;
    Rational old = D_;
    if (cand > D_) D_ = cand;
    emit(TraceEvent::Kind::DUpdate, depth,
         {{"old", to_string(old)}, {"candidate", to_string(cand)}, {"new", to_string(D_)}, {"source", to_string(anchor)}});

    const std::size_t i = *idx;
    if (i + 1 >= diag.vertices.size()) return;
    const ExponentPair& first = diag.vertices[i + 1];
    if (ref.line.evaluate(first.p, first.q) != ref.line.c) {
      const Edge& star0 = diag.edges[i];
      Line lstar = line_through(anchor, star0.line.sigma()), lref = line_through(anchor, ref.line.sigma());
      auto [value, bounded] = resolve(
          w,
          [&](const ExtRational& p0v) {
            Rational a = vertical_distance(lstar, p0v), b = vertical_distance(lref, p0v);
            return ExtRational(a > b ? a : b);
          },
          true);
      claims_.push_back(Claim{trace_.size(), anchor, value, bounded});
      emit(TraceEvent::Kind::Claim54Check, depth, {{"anchor", to_string(anchor)}, {"value", to_string(value)}});
      process_edge(w, anchor, star0, depth + 1, true, measure);
    }
    for (std::size_t j = i + 1; j < diag.edges.size(); ++j)
      process_edge(w, diag.edges[j].left, diag.edges[j], depth + 1, false, measure);
  }

  CriticalConfig cfg_;
  bool exact_input_;
  unsigned order_;
  bool exact_result_ = true;
  Work work_;
  Rational D_;
  std::vector<TraceEvent> trace_;
  std::vector<Claim> claims_;
};

}  // namespace

CriticalReport compute(const ExpandedGerm& g, const CriticalConfig& config) {
  Classification c = classify(g);
  if (c.degenerate())
    fail(ErrorCode::DegenerateInput, "germ is strongly degenerate (case " + std::to_string(c.degenerate_case) + ")");
  Runner runner(g, config);
  try {
    CriticalReport r = runner.run();
    if (!g.exact) r.certification = Certification::up_to(g.truncation_order);
    return r;
  } catch (const Error& e) {
    throw CriticalError(e, runner.trace());
  }
}

}  // namespace nc
