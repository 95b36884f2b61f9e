#include "newton_critic/resolution.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace nc {

namespace {

constexpr mpfr_prec_t kBaseBits = 192;
constexpr mpfr_prec_t kMaxBits = 4096;
// working precision of newly created values
thread_local mpfr_prec_t t_bits = kBaseBits;

struct BitsScope {
  mpfr_prec_t saved;
  explicit BitsScope(mpfr_prec_t bits) : saved(t_bits) { t_bits = bits; }
  ~BitsScope() { t_bits = saved; }
};
constexpr double kDominanceCap = 65536.0;
// v and |theta - center| are sampled down to 2^-kSpan of their range
constexpr double kSpan = 20.0;
constexpr unsigned kMaxHalvings = 14;
// largest log-spread of |P_E(t)| / t^q accepted on one good band
const double kMaxGoodSpread = std::log(512.0);

class Mp {
 public:
  Mp() {
    mpfr_init2(x_, t_bits);
    mpfr_set_zero(x_, 1);
  }
  explicit Mp(double d) : Mp() { mpfr_set_d(x_, d, MPFR_RNDN); }
  explicit Mp(const Rational& q) : Mp() { mpfr_set_q(x_, q.get_mpq_t(), MPFR_RNDN); }
  Mp(const Mp& o) {
    mpfr_init2(x_, std::max(t_bits, mpfr_get_prec(o.x_)));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  Mp& operator=(const Mp& o) {
    mpfr_set(x_, o.x_, MPFR_RNDN);
    return *this;
  }
  ~Mp() { mpfr_clear(x_); }

  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

 private:
  mpfr_t x_;
};

bool operator<(const Mp& a, const Mp& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator<=(const Mp& a, const Mp& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }

Mp add(const Mp& a, const Mp& b) {
  Mp r;
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Mp sub(const Mp& a, const Mp& b) {
  Mp r;
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Mp mul(const Mp& a, const Mp& b) {
  Mp r;
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

// v^p for v > 0
Mp power(const Mp& v, const Rational& p) {
  Mp r;
  if (p.get_den() == 1) {
    mpfr_pow_ui(r.get(), v.get(), p.get_num().get_ui(), MPFR_RNDN);
  } else {
    Mp e(p);
    mpfr_pow(r.get(), v.get(), e.get(), MPFR_RNDN);
  }
  return r;
}

class MpSeries {
 public:
  MpSeries() = default;
  explicit MpSeries(const PuiseuxPoly& g) : den_(g.denominator().get_ui()) {
    for (const auto& [e, c] : g.terms()) {
      const Rational k = e.p * den_;
      Rational mid = c.enclosure().midpoint();
      terms_.push_back({Mp(mid), mid, k.get_num().get_ui(), e.q});
      max_q_ = std::max(max_q_, e.q);
    }
  }

  // v > 0; magnitude receives the sum of the absolute values of the terms
  Mp operator()(const Mp& v, const Mp& theta, Mp* magnitude = nullptr) const {
    const bool wide = t_bits > kBaseBits;
    Mp w = v;
    if (den_ > 1) mpfr_rootn_ui(w.get(), v.get(), den_, MPFR_RNDN);
    std::vector<Mp> tq(max_q_ + 1);
    mpfr_set_ui(tq[0].get(), 1, MPFR_RNDN);
    for (unsigned q = 1; q <= max_q_; ++q) tq[q] = mul(tq[q - 1], theta);
    Mp acc, x, c;
    for (const auto& t : terms_) {
      mpfr_pow_ui(x.get(), w.get(), t.k, MPFR_RNDN);
      if (wide) {
        mpfr_set_q(c.get(), t.exact.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(x.get(), x.get(), c.get(), MPFR_RNDN);
      } else {
        mpfr_mul(x.get(), x.get(), t.c.get(), MPFR_RNDN);
      }
      if (t.q > 0) mpfr_mul(x.get(), x.get(), tq[t.q].get(), MPFR_RNDN);
      mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDN);
      if (magnitude) {
        mpfr_abs(x.get(), x.get(), MPFR_RNDN);
        mpfr_add(magnitude->get(), magnitude->get(), x.get(), MPFR_RNDN);
      }
    }
    return acc;
  }
  Mp operator()(const Mp& v) const { return (*this)(v, Mp()); }

 private:
  struct Term {
    Mp c;
    Rational exact;
    unsigned long k;  // v-exponent times den_
    unsigned q;
  };
  unsigned long den_ = 1;
  unsigned max_q_ = 0;
  std::vector<Term> terms_;
};

double radical_inverse(std::uint64_t i, unsigned base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

struct Halton {
  std::uint64_t index;
  explicit Halton(std::uint64_t seed) : index(1 + (seed % 1000003) * 4099) {}
  std::vector<double> next(unsigned dim) {
    static const unsigned primes[] = {2, 3, 5, 7, 11, 13};
    std::vector<double> out(dim);
    for (unsigned d = 0; d < dim; ++d) out[d] = radical_inverse(index, primes[d]);
    ++index;
    return out;
  }
};

PuiseuxPoly reflect(const PuiseuxPoly& g, int sv, int st) {
  PuiseuxPoly out;
  for (const auto& [e, c] : g.terms()) {
    int s = 1;
    if (sv < 0 && sign(e.p) != 0) {
      if (e.p.get_den() != 1) fail(ErrorCode::NegativeBase, "v -> -v needs integer v-exponents");
      if (e.p.get_num().get_ui() % 2 == 1) s = -s;
    }
    if (st < 0 && e.q % 2 == 1) s = -s;
    out.add_term(s > 0 ? c : -c, e.p, e.q);
  }
  return out;
}

PuiseuxPoly lift(const PuiseuxPoly& g, const std::optional<Adjunction>& adj) {
  if (!adj) return g;
  return map_coefficients(g, [&](const Coefficient& c) { return adj->lift(c); });
}

PuiseuxPoly mono(const Rational& c, const Rational& p) { return PuiseuxPoly::monomial(Coefficient(c), p, 0); }

Rational pow2(int k) {
  Rational r(1);
  if (k >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(k));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(-k));
  }
  return r;
}

// c v^m
struct End {
  Rational c, m;
};

// A dyadic rational near the geometric mean of lo < hi.
Rational dyadic_between(double lo, double hi) {
  const double g = std::sqrt(lo * hi);
  for (int bits = 2; bits < 60; ++bits) {
    const double scaled = std::round(std::ldexp(g, bits));
    const double t = std::ldexp(scaled, -bits);
    if (t > lo && t < hi) return Rational(mpz_class(static_cast<long>(scaled))) / pow2(bits);
  }
  fail(ErrorCode::InvariantViolation, "empty band");
}

struct Root {
  RealRoot root;
  double approx = 0;
};

struct EdgeInfo {
  const Edge* edge = nullptr;
  PuiseuxPoly on_edge;
  std::vector<Root> roots;  // positive only, ascending
};

class Builder {
 public:
  Builder(const ResolveConfig& cfg, int log_c_floor, Rational keep)
      : cfg_(cfg), log_c_floor_(log_c_floor), keep_(std::move(keep)) {}

  // Regions of Q(v, u) = P(v, H + sigma u) for 0 <= u < top, ascending in theta.
  std::vector<RegionNode> frame(const PuiseuxPoly& Q, const PuiseuxPoly& H, int sigma, const Bound& at_center,
                                const Bound& at_top, const std::optional<Rational>& m_parent, const Rational& delta_parent,
                                unsigned parent_s, bool parent_exact, unsigned chain);

  double eps_cap = 1;
  unsigned S = 0;
  unsigned max_chain = 0;
  std::vector<double> C_choices;

 private:
  int choose_log_delta(const std::vector<EdgeInfo>& edges) const;
  int choose_log_c(const PuiseuxPoly& Q, const NewtonDiagram& D, std::size_t k, const std::vector<EdgeInfo>& edges,
                   double delta) const;
  void cap_eps(const Rational& c1, const Rational& e1, const Rational& c2, const Rational& e2);
  void cap_band(const PuiseuxPoly& Q, const Rational& m, const Rational& e, double t_lo, double t_hi, double budget,
                unsigned deriv);
  void cap_vertex(const PuiseuxPoly& Q, const ExponentPair& V, const std::optional<End>& lower,
                  const std::optional<End>& upper, const std::vector<const PuiseuxPoly*>& excluded);

  const ResolveConfig& cfg_;
  int log_c_floor_;
  Rational keep_;
};

// Half-width of the bad bands: roots stay apart and the lowest Taylor term of
// the edge polynomial dominates on each band.
int Builder::choose_log_delta(const std::vector<EdgeInfo>& edges) const {
  for (int ld = -2; ld >= -30; --ld) {
    const double delta = std::ldexp(1.0, ld);
    bool ok = true;
    for (const auto& info : edges) {
      std::vector<double> poly(info.edge->left.q + 1, 0.0);
      for (const auto& [e, c] : info.on_edge.terms()) poly[e.q] = c.to_double();
      for (std::size_t j = 0; ok && j < info.roots.size(); ++j) {
        const double r = info.roots[j].approx;
        if (r < 2 * delta || (j > 0 && r - info.roots[j - 1].approx < 4 * delta)) ok = false;
        // Taylor coefficients at r by repeated synthetic division
        std::vector<double> work = poly, taylor;
        while (!work.empty()) {
          for (std::size_t i = work.size() - 1; i > 0; --i) work[i - 1] += r * work[i];
          taylor.push_back(work[0]);
          work.erase(work.begin());
        }
        const unsigned s = info.roots[j].root.multiplicity;
        double sum = 0;
        for (std::size_t q = s + 1; q < taylor.size(); ++q)
          sum += std::fabs(taylor[q] / taylor[s]) * std::pow(delta, static_cast<double>(q - s));
        if (sum > 0.5) ok = false;
      }
    }
    if (ok) return ld;
  }
  fail(ErrorCode::InvariantViolation, "edge roots are too close to separate");
}

int Builder::choose_log_c(const PuiseuxPoly& Q, const NewtonDiagram& D, std::size_t k,
                          const std::vector<EdgeInfo>& edges, double delta) const {
  auto abs_coef = [&](const ExponentPair& e) { return std::fabs(Q.coefficient(e.p, e.q).to_double()); };
  const int max_log = static_cast<int>(std::log2(kDominanceCap));
  for (int lc = std::max(2, log_c_floor_); lc <= max_log; ++lc) {
    const double C = std::ldexp(1.0, lc);
    bool ok = true;
    for (const auto& info : edges) {
      for (std::size_t j = 0; j < info.roots.size(); ++j) {
        const double r = info.roots[j].approx;
        if (r - delta < 2.0 / C || r + delta > C / 2.0) ok = false;
      }
    }
    for (std::size_t j = k; ok && j < D.vertices.size(); ++j) {
      const ExponentPair& V = D.vertices[j];
      const double c0 = abs_coef(V);
      double sum = 0;
      auto add_edge = [&](const PuiseuxPoly& on_edge) {
        for (const auto& [e, c] : on_edge.terms()) {
          if (e == V) continue;
          const int dq = std::abs(static_cast<int>(e.q) - static_cast<int>(V.q));
          sum += std::fabs(c.to_double()) / c0 * std::pow(C, -dq);
        }
      };
      if (j > k) add_edge(edges[j - 1 - k].on_edge);
      if (j < D.edges.size()) add_edge(edges[j - k].on_edge);
      if (sum > 0.5) ok = false;
    }
    if (ok) return lc;
  }
  fail(ErrorCode::InvariantViolation, "no dominance constant up to 2^16 separates the edge roots");
}

// c1 v^e1 <= c2 v^e2 / 2 for v < eps, where e1 > e2
void Builder::cap_eps(const Rational& c1, const Rational& e1, const Rational& c2, const Rational& e2) {
  if (e1 <= e2) return;
  const double ratio = to_double(c2) / (2.0 * to_double(c1));
  eps_cap = std::min(eps_cap, std::pow(ratio, 1.0 / to_double(e1 - e2)));
}

// Terms above the line p + m q = e, and their theta-derivatives when deriv = 1,
// stay below budget v^(e - deriv m) for u = t v^m, t in [t_lo, t_hi].
void Builder::cap_band(const PuiseuxPoly& Q, const Rational& m, const Rational& e, double t_lo, double t_hi,
                       double budget, unsigned deriv) {
  if (!(budget > 0)) fail(ErrorCode::InvariantViolation, "edge polynomial vanishes on a good band");
  std::vector<std::pair<double, double>> terms;  // weight, gap
  for (const auto& [x, c] : Q.terms()) {
    const Rational gap = x.p + m * x.q - e;
    if (sign(gap) <= 0 || x.q < deriv) continue;
    const double k = (deriv ? x.q : 1) * std::max(std::pow(t_lo, x.q - deriv), std::pow(t_hi, x.q - deriv));
    terms.push_back({std::fabs(c.to_double()) * k, to_double(gap)});
  }
  for (const auto& [w, gap] : terms)
    eps_cap = std::min(eps_cap, std::pow(budget / (terms.size() * w), 1.0 / gap));
}

// Terms off the adjacent edges stay below a quarter of the vertex monomial on
// lower.c v^lower.m <= u < upper.c v^upper.m; no upper end means u < eps.
void Builder::cap_vertex(const PuiseuxPoly& Q, const ExponentPair& V, const std::optional<End>& lower,
                         const std::optional<End>& upper, const std::vector<const PuiseuxPoly*>& excluded) {
  const double cv = std::fabs(Q.coefficient(V.p, V.q).to_double());
  std::vector<std::pair<double, double>> terms;
  for (const auto& [x, c] : Q.terms()) {
    if (x == V) continue;
    if (std::any_of(excluded.begin(), excluded.end(),
                    [&](const PuiseuxPoly* ed) { return !ed->coefficient(x.p, x.q).is_zero(); }))
      continue;
    const int dq = static_cast<int>(x.q) - static_cast<int>(V.q);
    const Rational dp = x.p - V.p;
    double w = std::fabs(c.to_double()) / cv;
    Rational gap = dp;
    if (dq > 0 && upper) {
      w *= std::pow(to_double(upper->c), dq);
      gap += upper->m * dq;
    } else if (dq > 0) {
      gap += dq;
    } else if (dq < 0) {
      if (!lower) continue;
      w *= std::pow(to_double(lower->c), dq);
      gap += lower->m * dq;
    }
    if (sign(gap) <= 0) continue;
    terms.push_back({w, to_double(gap)});
  }
  for (const auto& [w, gap] : terms) eps_cap = std::min(eps_cap, std::pow(0.25 / (terms.size() * w), 1.0 / gap));
}

std::vector<RegionNode> Builder::frame(const PuiseuxPoly& Q, const PuiseuxPoly& H, int sigma, const Bound& at_center,
                                       const Bound& at_top, const std::optional<Rational>& m_parent,
                                       const Rational& delta_parent, unsigned parent_s, bool parent_exact,
                                       unsigned chain) {
  if (Q.is_zero()) fail(ErrorCode::ZeroPolynomial, "resolution of the zero polynomial");
  const NewtonDiagram D = diagram(taylor_support(Q), false);
  std::size_t k = D.edges.size();
  for (std::size_t i = 0; i < D.edges.size(); ++i)
    if (!m_parent || D.edges[i].slope > *m_parent) {
      k = i;
      break;
    }

  std::vector<EdgeInfo> edges;
  for (std::size_t i = k; i < D.edges.size(); ++i) {
    EdgeInfo info;
    info.edge = &D.edges[i];
    info.on_edge = edge_polynomial(Q, D.edges[i]);
    std::vector<Coefficient> coeffs(D.edges[i].left.q + 1, Coefficient(0));
    for (const auto& [e, c] : info.on_edge.terms()) coeffs[e.q] = c;
    for (RealRoot& rr : real_roots(KPoly(std::move(coeffs)))) {
      if (rr.value.sign() <= 0) continue;
      EdgeFrame ef{Q, D.edges[i].left, D.edges[i]};
      MultiplicityData md = multiplicity_data(ef, rr);
      if (parent_s > 0 && md.s >= parent_s)
        fail(parent_exact ? ErrorCode::MultiplicityNotDecreasing : ErrorCode::TruncationInsufficient,
             "bad root multiplicity " + std::to_string(md.s) + " does not drop below " + std::to_string(parent_s));
      S = std::max(S, md.s);
      rr.value.refine_to(Rational(1, 1 << 30));
      info.roots.push_back({rr, rr.value.to_double()});
    }
    edges.push_back(std::move(info));
  }

  const int ld = choose_log_delta(edges);
  const int lc = choose_log_c(Q, D, k, edges, std::ldexp(1.0, ld));
  C_choices.push_back(std::ldexp(1.0, lc));
  const Rational C = pow2(lc), Cinv = pow2(-lc), delta = pow2(ld);
  const double Cd = std::ldexp(1.0, lc);

  // monomial breakpoints in ascending u
  {
    std::vector<std::pair<Rational, Rational>> mono_bp;
    for (std::size_t i = D.edges.size(); i-- > k;) {
      mono_bp.push_back({Cinv, D.edges[i].slope});
      mono_bp.push_back({C, D.edges[i].slope});
    }
    if (m_parent) mono_bp.push_back({delta_parent, *m_parent});
    for (std::size_t i = 0; i + 1 < mono_bp.size(); ++i)
      cap_eps(mono_bp[i].first, mono_bp[i].second, mono_bp[i + 1].first, mono_bp[i + 1].second);
  }

  auto theta_bound = [&](const PuiseuxPoly& u, const std::optional<Adjunction>& adj) {
    PuiseuxPoly h = lift(H, adj);
    return Bound::of(sigma > 0 ? h + u : h - u);
  };
  // breakpoints[i] and breakpoints[i + 1] bound nodes[i], in ascending u
  std::vector<Bound> bps{at_center};
  std::vector<RegionNode> nodes;

  auto vertex_region = [&](std::size_t j) {
    const ExponentPair& V = D.vertices[j];
    RegionNode n;
    n.kind = RegionNode::Kind::VertexDominant;
    n.center = H;
    n.a = V.p;
    n.b = Rational(V.q);
    n.m = j < D.edges.size() ? D.edges[j].slope : Rational(0);
    n.dominance = Cd;
    n.origin = "vertex " + to_string(V);
    if (Q.size() == 1) {
      const double c = std::fabs(Q.terms().begin()->second.to_double());
      n.comparability = std::max(c, 1.0 / c);
      n.exact_constant = true;
    }
    std::optional<End> lower, upper;
    std::vector<const PuiseuxPoly*> excluded;
    if (j < D.edges.size()) {
      lower = End{C, D.edges[j].slope};
      excluded.push_back(&edges[j - k].on_edge);
    }
    if (j > k) {
      upper = End{Cinv, D.edges[j - 1].slope};
      excluded.push_back(&edges[j - 1 - k].on_edge);
    } else if (m_parent) {
      upper = End{delta_parent, *m_parent};
    }
    cap_vertex(Q, V, lower, upper, excluded);
    nodes.push_back(std::move(n));
  };

  // bad regions with s > 1, expanded once the breakpoints are known
  struct Pending {
    std::size_t node;
    PuiseuxPoly Q1;
    PuiseuxPoly center;
    Rational m;
    unsigned s;
    bool exact;
  };
  std::vector<Pending> pending;

  for (std::size_t i = D.edges.size(); i-- > k;) {
    const Edge& E = D.edges[i];
    const EdgeInfo& info = edges[i - k];
    const Rational m = E.slope;
    const Rational e = E.left.p + m * E.left.q;
    vertex_region(i + 1);
    bps.push_back(theta_bound(mono(Cinv, m), std::nullopt));
    std::vector<double> pe(E.left.q + 1, 0.0);
    for (const auto& [x, c] : info.on_edge.terms()) pe[x.q] = c.to_double();
    auto eval_pe = [&](double t, unsigned deriv) {
      double val = 0;
      for (std::size_t j = pe.size(); j-- > deriv;) {
        double c = pe[j];
        for (unsigned d = 0; d < deriv; ++d) c *= static_cast<double>(j - d);
        val = val * t + c;
      }
      return val;
    };
    // t = u / v^m runs over [t_lo, t_hi]; the edge point whose monomial gives
    // the flattest ratio is used, and wide bands are split at dyadic t
    std::function<void(double, double)> good = [&](double t_lo, double t_hi) {
      double best = std::numeric_limits<double>::infinity(), floor_pe = best;
      unsigned best_q = E.left.q;
      for (unsigned q = E.right.q; q <= E.left.q; ++q) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int j = 0; j <= 256; ++j) {
          const double t = t_lo * std::pow(t_hi / t_lo, j / 256.0);
          const double val = std::fabs(eval_pe(t, 0));
          floor_pe = std::min(floor_pe, val);
          const double l = std::log(val) - q * std::log(t);
          lo = std::min(lo, l);
          hi = std::max(hi, l);
        }
        if (hi - lo < best) {
          best = hi - lo;
          best_q = q;
        }
      }
      if (best > kMaxGoodSpread && t_hi / t_lo > 1.5) {
        const Rational t = dyadic_between(t_lo, t_hi);
        good(t_lo, to_double(t));
        bps.push_back(theta_bound(mono(t, m), std::nullopt));
        good(to_double(t), t_hi);
        return;
      }
      cap_band(Q, m, e, t_lo, t_hi, floor_pe / 4, 0);
      RegionNode n;
      n.kind = RegionNode::Kind::EdgeGood;
      n.center = H;
      n.a = e - m * best_q;
      n.b = Rational(best_q);
      n.m = m;
      n.dominance = Cd;
      n.origin = "edge " + to_string(E.left) + "-" + to_string(E.right);
      nodes.push_back(std::move(n));
    };
    const double dd = std::ldexp(1.0, ld);
    double t_prev = 1.0 / Cd;
    for (const Root& root : info.roots) {
      std::optional<Adjunction> adj;
      Coefficient r;
      if (root.root.in_field) {
        r = *root.root.in_field;
      } else {
        adj = adjoin(Q.field(), root.root.value);
        r = adj->beta;
      }
      const PuiseuxPoly QL = lift(Q, adj);
      const unsigned s = root.root.multiplicity;
      PuiseuxPoly target = QL;
      for (unsigned d = 1; d < s; ++d) target = d_theta(target);
      const Rational order = std::max(Rational(cfg_.order), Rational(2 * e + 2));
      BranchSeries br = newton_puiseux_root(target, r, m, order);

      good(t_prev, root.approx - dd);
      t_prev = root.approx + dd;
      bps.push_back(theta_bound(br.h - mono(delta, m), adj));
      RegionNode bad;
      bad.kind = RegionNode::Kind::BadTranslated;
      bad.center = lift(H, adj) + (sigma > 0 ? br.h : -br.h);
      bad.m = m;
      bad.dominance = Cd;
      bad.root = root.root.value.to_string();
      bad.root_approx = root.approx;
      bad.multiplicity = s;
      bad.translation = bad.center;
      bad.translation_order = m;
      bad.origin = "root " + root.root.value.to_string() + " of edge " + to_string(E.left) + "-" + to_string(E.right);
      if (s == 1) {
        bad.a = e - m;
        bad.b = Rational(1);
        cap_band(Q, m, e, root.approx - dd, root.approx + dd, std::fabs(eval_pe(root.approx, 1)) / 4, 1);
      } else {
        auto keep = [&](const ExponentPair& x) { return x.p <= keep_; };
        PuiseuxPoly Q1 = br.exact ? shift_theta(QL, br.h) : shift_theta(QL, br.h, keep);
        pending.push_back({nodes.size(), std::move(Q1), bad.center, m, s, br.exact && parent_exact});
      }
      nodes.push_back(std::move(bad));
      bps.push_back(theta_bound(br.h + mono(delta, m), adj));
    }
    good(t_prev, Cd);
    bps.push_back(theta_bound(mono(C, m), std::nullopt));
  }
  vertex_region(k);
  bps.push_back(at_top);

  for (const Pending& p : pending) {
    if (chain + 1 > cfg_.max_multiplicity_rounds)
      fail(ErrorCode::MaxDepthExceeded, "more than " + std::to_string(cfg_.max_multiplicity_rounds) +
                                            " nested bad regions");
    max_chain = std::max(max_chain, chain + 1);
    const Bound center = Bound::of(p.center);
    // the child on the u-increasing side reaches breakpoint node+1
    std::vector<RegionNode> up = frame(p.Q1, p.center, sigma, center, bps[p.node + 1], p.m, delta, p.s, p.exact, chain + 1);
    std::vector<RegionNode> down =
        frame(reflect(p.Q1, 1, -1), p.center, -sigma, center, bps[p.node], p.m, delta, p.s, p.exact, chain + 1);
    RegionNode& bad = nodes[p.node];
    std::vector<RegionNode>& lo = sigma > 0 ? down : up;
    std::vector<RegionNode>& hi = sigma > 0 ? up : down;
    for (auto& n : lo) bad.children.push_back(std::move(n));
    for (auto& n : hi) bad.children.push_back(std::move(n));
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].lower = sigma > 0 ? bps[i] : bps[i + 1];
    nodes[i].upper = sigma > 0 ? bps[i + 1] : bps[i];
  }
  if (sigma < 0) std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

// Evaluation form of a tree.
struct CNode {
  const RegionNode* node = nullptr;
  MpSeries lower, upper, center;
  bool upper_inf = false;
  std::vector<CNode> kids;
  std::string path;
};

CNode compile(const RegionNode& n, const std::string& path) {
  CNode c;
  c.node = &n;
  c.lower = MpSeries(*n.lower.series);
  c.upper_inf = n.upper.is_infinite();
  if (!c.upper_inf) c.upper = MpSeries(*n.upper.series);
  c.center = MpSeries(n.center);
  c.path = path;
  for (std::size_t i = 0; i < n.children.size(); ++i) c.kids.push_back(compile(n.children[i], path + "/" + std::to_string(i)));
  return c;
}

std::vector<CNode> compile(const RegionTree& t) {
  std::vector<CNode> out;
  for (std::size_t i = 0; i < t.roots.size(); ++i) out.push_back(compile(t.roots[i], std::to_string(i)));
  return out;
}

bool contains(const CNode& c, const Mp& v, const Mp& theta) {
  if (theta < c.lower(v)) return false;
  return c.upper_inf || theta < c.upper(v);
}

void collect_leaves(std::vector<CNode>& nodes, std::vector<CNode*>& out) {
  for (auto& n : nodes) {
    if (n.kids.empty())
      out.push_back(&n);
    else
      collect_leaves(n.kids, out);
  }
}

// |P| / (v^a |theta - center|^b), raising the precision until cancellation in P
// leaves at least 64 significant bits
double ratio(const MpSeries& P, const CNode& leaf, const Mp& v, const Mp& theta) {
  for (mpfr_prec_t bits = kBaseBits;; bits *= 4) {
    BitsScope scope(bits);
    Mp mag;
    Mp num = P(v, theta, &mag);
    mpfr_abs(num.get(), num.get(), MPFR_RNDN);
    if (bits < kMaxBits && !mpfr_zero_p(mag.get())) {
      if (mpfr_zero_p(num.get())) continue;
      if (mpfr_get_exp(mag.get()) - mpfr_get_exp(num.get()) > static_cast<long>(bits) - 64) continue;
    }
    Mp den = power(v, leaf.node->a);
    if (sign(leaf.node->b) != 0) {
      Mp d = sub(theta, leaf.center(v));
      mpfr_abs(d.get(), d.get(), MPFR_RNDN);
      den = mul(den, power(d, leaf.node->b));
    }
    Mp r;
    mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDN);
    return r.to_double();
  }
}

// A point of the leaf at a v drawn from [eps 2^-span, eps); false when the band is empty there.
bool sample_point(const CNode& leaf, double eps, double span, const std::vector<double>& x, Mp& v, Mp& theta) {
  v = Mp(eps * std::exp2(-span * x[0]));
  Mp lo = leaf.lower(v);
  Mp hi = leaf.upper_inf ? Mp(eps) : leaf.upper(v);
  const Mp zero, top(eps);
  if (lo < zero) lo = zero;
  if (top < hi) hi = top;
  if (hi <= lo) return false;
  const Mp c = leaf.center(v);
  // distances from the center to the near and far ends of the band, and the side
  Mp near, far;
  int side;
  if (c <= lo) {
    near = sub(lo, c);
    far = sub(hi, c);
    side = 1;
  } else if (hi <= c) {
    near = sub(c, hi);
    far = sub(c, lo);
    side = -1;
  } else {
    side = x[2] < 0.5 ? -1 : 1;
    far = side > 0 ? sub(hi, c) : sub(c, lo);
  }
  if (mpfr_zero_p(near.get())) {
    near = far;
    mpfr_mul_2si(near.get(), near.get(), -static_cast<long>(span), MPFR_RNDN);
  }
  // log-uniform between near and far
  Mp ln, lf, t;
  mpfr_log(ln.get(), near.get(), MPFR_RNDN);
  mpfr_log(lf.get(), far.get(), MPFR_RNDN);
  t = sub(lf, ln);
  mpfr_mul_d(t.get(), t.get(), x[1], MPFR_RNDN);
  t = add(ln, t);
  mpfr_exp(t.get(), t.get(), MPFR_RNDN);
  if (side > 0)
    theta = add(c, t);
  else
    theta = sub(c, t);
  return lo <= theta && theta < hi;
}

void calibrate(RegionTree& tree, std::vector<CNode>& compiled, std::uint64_t seed) {
  const MpSeries P(tree.polynomial);
  std::vector<CNode*> ls;
  collect_leaves(compiled, ls);
  Halton seq(seed ^ 0x5bd1e995u);
  for (CNode* leaf : ls) {
    auto* node = const_cast<RegionNode*>(leaf->node);
    if (node->exact_constant) continue;
    double worst = 1;
    for (unsigned i = 0; i < 128; ++i) {
      std::vector<double> x = seq.next(3);
      // band ends are included deliberately
      if (i < 4) x[1] = (i % 2 == 0) ? 0.0 : 1.0 - 1e-12;
      Mp v, theta;
      if (!sample_point(*leaf, tree.epsilon, kSpan, x, v, theta)) continue;
      double r = ratio(P, *leaf, v, theta);
      if (!(r > 0) || !std::isfinite(r)) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      worst = std::max({worst, r, 1.0 / r});
    }
    node->comparability = 2.0 * worst;
  }
}

VerifyReport verify_compiled(const RegionTree& tree, const std::vector<CNode>& compiled, const VerifyConfig& cfg) {
  VerifyReport rep;
  Halton cover(cfg.seed);
  for (unsigned i = 0; i < cfg.coverage_samples; ++i) {
    std::vector<double> x = cover.next(2);
    const Mp v(tree.epsilon * x[0]), theta(tree.epsilon * x[1]);
    if (x[0] == 0.0) continue;
    ++rep.coverage_samples;
    const std::vector<CNode>* level = &compiled;
    while (level != nullptr) {
      const CNode* hit = nullptr;
      unsigned count = 0;
      for (const CNode& c : *level)
        if (contains(c, v, theta)) {
          ++count;
          hit = &c;
        }
      if (count == 0) ++rep.uncovered;
      if (count > 1) ++rep.overlapping;
      level = (count == 1 && !hit->kids.empty()) ? &hit->kids : nullptr;
    }
  }

  const MpSeries P(tree.polynomial);
  std::vector<CNode*> ls;
  collect_leaves(const_cast<std::vector<CNode>&>(compiled), ls);
  Halton seq(cfg.seed * 31 + 17);
  bool all = true;
  for (const CNode* leaf : ls) {
    LeafCheck lc;
    lc.path = leaf->path;
    lc.comparability = leaf->node->comparability;
    lc.min_ratio = std::numeric_limits<double>::infinity();
    lc.max_ratio = 0;
    bool ok = lc.comparability <= kComparabilityCap;
    for (unsigned attempt = 0; lc.samples < cfg.leaf_samples && attempt < 4 * cfg.leaf_samples; ++attempt) {
      Mp v, theta;
      if (!sample_point(*leaf, tree.epsilon, kSpan, seq.next(3), v, theta)) continue;
      const double r = ratio(P, *leaf, v, theta);
      ++lc.samples;
      lc.min_ratio = std::min(lc.min_ratio, r);
      lc.max_ratio = std::max(lc.max_ratio, r);
      if (!(r * lc.comparability >= 1.0 && r <= lc.comparability)) ok = false;
    }
    if (lc.samples == 0) lc.min_ratio = lc.max_ratio = 0;
    lc.ok = ok;
    all = all && ok;
    rep.leaves.push_back(lc);
  }
  rep.ok = all && rep.uncovered == 0 && rep.overlapping == 0;
  return rep;
}

Integer series_denominator(const RegionNode& n) {
  Integer m = lcm_int(n.center.denominator(), n.lower.series->denominator());
  if (n.upper.series) m = lcm_int(m, n.upper.series->denominator());
  for (const auto& c : n.children) m = lcm_int(m, series_denominator(c));
  return m;
}

Rational max_v_exponent(const PuiseuxPoly& g) {
  Rational m(0);
  for (const auto& [e, c] : g.terms()) m = std::max(m, e.p);
  return m;
}

RegionTree resolve_reflected(const PuiseuxPoly& P, const std::string& quadrant, const ResolveConfig& cfg) {
  if (P.is_zero()) fail(ErrorCode::ZeroPolynomial, "resolution of the zero polynomial");
  const Rational keep = std::max(Rational(cfg.order), max_v_exponent(P));
  const int max_log = static_cast<int>(std::log2(kDominanceCap));
  std::string last_failure = "no candidate";
  for (int lc = 2; lc <= max_log; ++lc) {
    Builder b(cfg, lc, keep);
    RegionTree tree;
    tree.quadrant = quadrant;
    tree.polynomial = P;
    tree.roots = b.frame(P, PuiseuxPoly(), 1, Bound::of(PuiseuxPoly()), Bound::infinity(), std::nullopt, Rational(0), 0,
                         true, 0);
    tree.C_choices = b.C_choices;
    tree.S = b.S;
    tree.depth = b.max_chain;
    tree.M = P.denominator();
    for (const auto& n : tree.roots) tree.M = lcm_int(tree.M, series_denominator(n));

    double eps = cfg.eps_hint;
    if (eps > b.eps_cap) eps = std::exp2(std::floor(std::log2(b.eps_cap)));
    for (unsigned h = 0; h < kMaxHalvings; ++h, eps /= 2) {
      tree.epsilon = eps;
      std::vector<CNode> compiled = compile(tree);
      calibrate(tree, compiled, cfg.seed);
      VerifyReport rep = verify_compiled(tree, compiled, {cfg.search_samples, cfg.search_leaf_samples, cfg.seed + 101});
      if (rep.ok) return tree;
      last_failure = "eps " + std::to_string(eps) + ": uncovered " + std::to_string(rep.uncovered) + ", overlapping " +
                     std::to_string(rep.overlapping);
    }
    // floors below the smallest constant actually chosen rebuild the same tree
    lc = std::max(lc, static_cast<int>(std::log2(*std::min_element(tree.C_choices.begin(), tree.C_choices.end()))));
  }
  fail(ErrorCode::TruncationInsufficient, "no region tree passed sampled verification (" + last_failure + ")");
}

}  // namespace

const char* region_kind_name(RegionNode::Kind kind) {
  switch (kind) {
    case RegionNode::Kind::VertexDominant: return "VertexDominant";
    case RegionNode::Kind::EdgeGood: return "EdgeGood";
    case RegionNode::Kind::BadTranslated: return "BadTranslated";
  }
  return "Unknown";
}

MultiplicityData multiplicity_data(const EdgeFrame& frame, const RealRoot& root) {
  MultiplicityData md;
  md.s = root.multiplicity;
  md.bound = frame.edge.left.q - frame.edge.right.q;
  md.exponent = frame.weighted_degree() - md.s * frame.edge.slope;
  if (md.s == 0 || md.s > md.bound)
    fail(ErrorCode::InvariantViolation, "root multiplicity " + std::to_string(md.s) + " exceeds edge height " +
                                            std::to_string(md.bound));
  if (sign(md.exponent) < 0) fail(ErrorCode::InvariantViolation, "negative exponent for the s-th derivative");
  return md;
}

RegionTree resolve(const PuiseuxPoly& P, const ResolveConfig& config) { return resolve_reflected(P, "++", config); }

std::vector<RegionTree> resolve_quadrants(const PuiseuxPoly& P, const ResolveConfig& config) {
  std::vector<RegionTree> out;
  for (int sv : {1, -1})
    for (int st : {1, -1}) {
      std::string q = std::string(sv > 0 ? "+" : "-") + (st > 0 ? "+" : "-");
      out.push_back(resolve_reflected(reflect(P, sv, st), q, config));
    }
  return out;
}

VerifyReport verify(const RegionTree& tree, const VerifyConfig& config) {
  return verify_compiled(tree, compile(tree), config);
}

std::vector<const RegionNode*> leaves(const RegionTree& tree) {
  std::vector<const RegionNode*> out;
  std::function<void(const RegionNode&)> walk = [&](const RegionNode& n) {
    if (n.is_leaf())
      out.push_back(&n);
    else
      for (const auto& c : n.children) walk(c);
  };
  for (const auto& r : tree.roots) walk(r);
  return out;
}

}  // namespace nc
