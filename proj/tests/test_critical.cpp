#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "newton_critic/branch.hpp"
#include "newton_critic/critical.hpp"
#include "newton_critic/degeneracy.hpp"
#include "test_support.hpp"

namespace nc {
namespace {

using testing::germ;

CriticalReport run(const char* text, unsigned order = kDefaultOrder) { return compute(load_germ(text, order)); }

std::vector<const TraceEvent*> events(const CriticalReport& r, TraceEvent::Kind k) {
  std::vector<const TraceEvent*> out;
  for (const auto& e : r.trace)
    if (e.kind == k) out.push_back(&e);
  return out;
}

KPoly qpoly_to_k(std::initializer_list<long> c) { return to_kpoly(qpoly_from_ints(c)); }

EdgeFrame frame_for(const PuiseuxPoly& g, bool reduced = true) {
  NewtonDiagram d = diagram(taylor_support(g), reduced);
  return EdgeFrame{g, d.edges.at(0).left, d.edges.at(0)};
}

TEST(EdgeKappaTest, Examples) {
  EXPECT_EQ(edge_kappa(frame_for(germ("(theta - v)^3*v + v^3"))).in_r, qpoly_to_k({-6, 6}));
  EXPECT_EQ(edge_kappa(frame_for(germ("(theta + exp(v) - 1)^3*v + v^2"))).in_r, qpoly_to_k({6, 6}));
  EdgeKappa k = edge_kappa(frame_for(germ("theta^2 - v^2"), false));
  EXPECT_EQ(k.in_r, qpoly_to_k({2}));
  EXPECT_EQ(k.e, Rational(0));
  EXPECT_EQ(edge_kappa(frame_for(germ("(theta - v)^3*v + v^3"))).e, Rational(2));
}

TEST(EdgeKappaTest, NoSecondDerivative) {
  PuiseuxPoly g = germ("v*theta + v^3");
  NewtonDiagram d = diagram(taylor_support(g), false);
  try {
    edge_kappa(EdgeFrame{g, d.edges[0].left, d.edges[0]});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSecondDerivativeOnEdge);
  }
}

TEST(BinomialTest, Examples) {
  auto m = match_binomial(germ("(theta + 1/2*v^2)^3*v - (1/2*v^2)^3*v"));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->W, 3U);
  EXPECT_EQ(m->r, Coefficient(Rational(1, 2)));
  EXPECT_EQ(m->w, Rational(2));
  EXPECT_EQ(m->b, Rational(1));
  auto m2 = match_binomial(germ("v*(theta + v)^3 - v*v^3"));
  ASSERT_TRUE(m2);
  EXPECT_EQ(m2->W, 3U);
  EXPECT_EQ(m2->r, Coefficient(1));
  EXPECT_FALSE(match_binomial(germ("v*theta^3 + v^2*theta")));
  EXPECT_FALSE(match_binomial(germ("v*theta^2 + 2*v^2*theta")));
}

TEST(BranchTest, Examples) {
  BranchSeries a = newton_puiseux_root(d_theta(germ("(theta - v)^2 - v^3")), Coefficient(1), Rational(1), Rational(10));
  EXPECT_EQ(a.h, germ("v"));
  EXPECT_TRUE(a.exact);
  PuiseuxPoly q = germ("theta^2 - v^3");
  BranchSeries b = newton_puiseux_root(q, Coefficient(1), Rational(3, 2), Rational(20));
  EXPECT_EQ(b.h, PuiseuxPoly::monomial(Coefficient(1), Rational(3, 2), 0));
  EXPECT_TRUE(b.exact);
  BranchSeries c = newton_puiseux_root(germ("theta - v - v^2*theta"), Coefficient(1), Rational(1), Rational(8));
  EXPECT_EQ(c.h, germ("v + v^3 + v^5 + v^7"));
  EXPECT_FALSE(c.exact);
  EXPECT_THROW(newton_puiseux_root(germ("(theta - v)^2"), Coefficient(1), Rational(1), Rational(5)), Error);
  EXPECT_THROW(newton_puiseux_root(germ("theta - v"), Coefficient(2), Rational(1), Rational(5)), Error);
}

TEST(CriticalTest, FirstWorkedExample) {
  CriticalReport r = run("(theta - v)^3*v + v^3");
  EXPECT_EQ(r.p_gamma, Rational(3));
  EXPECT_EQ(r.D_gamma, Rational(3));
  EXPECT_TRUE(r.certification.exact);
  ASSERT_EQ(events(r, TraceEvent::Kind::InitD).size(), 1U);
  EXPECT_EQ(events(r, TraceEvent::Kind::InitD)[0]->get("value"), "1");
  auto roots = events(r, TraceEvent::Kind::RootFound);
  ASSERT_EQ(roots.size(), 1U);
  EXPECT_EQ(roots[0]->get("r"), "1");
  auto d = events(r, TraceEvent::Kind::DUpdate);
  ASSERT_EQ(d.size(), 1U);
  EXPECT_EQ(d[0]->get("new"), "3");
  EXPECT_EQ(d[0]->get("source"), "(1,3)");
}

TEST(CriticalTest, SecondWorkedExample) {
  for (unsigned order : {10U, 12U, 16U}) {
    CriticalReport r = run("(theta + exp(v) - 1)^3*v + v^2", order);
    EXPECT_EQ(r.p_gamma, Rational(3)) << order;
    EXPECT_FALSE(r.certification.exact);
    EXPECT_EQ(r.certification.order, order);
    auto d = events(r, TraceEvent::Kind::DUpdate);
    ASSERT_GE(d.size(), 2U);
    EXPECT_EQ(d[0]->get("candidate"), "5/2");
    EXPECT_EQ(d.back()->get("new"), "3");
    EXPECT_EQ(events(r, TraceEvent::Kind::ScenarioTwoCollapse).size(), 1U);
    EXPECT_EQ(events(r, TraceEvent::Kind::InitD)[0]->get("value"), "2");
  }
}

TEST(CriticalTest, CircleFamily) {
  CriticalReport r = run("v*(1 + theta^2)");
  EXPECT_EQ(r.p_gamma, Rational(2));
  EXPECT_EQ(events(r, TraceEvent::Kind::EdgeVisited).size(), 0U);
  EXPECT_EQ(events(r, TraceEvent::Kind::InitD)[0]->get("value"), "2");
}

TEST(CriticalTest, PowerFamily) {
  for (int k = 2; k <= 6; ++k) {
    std::string s = "v*(1 + theta^" + std::to_string(k) + ")";
    EXPECT_EQ(run(s.c_str()).p_gamma, Rational(k)) << s;
  }
}

TEST(CriticalTest, ThetaSquaredFamily) {
  for (int k = 3; k <= 7; ++k) {
    std::string s = "theta^2 + v*theta^" + std::to_string(k);
    EXPECT_EQ(run(s.c_str()).p_gamma, Rational(2)) << s;
  }
}

TEST(CriticalTest, RejectsDegenerate) {
  try {
    run("v*theta");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
  }
}

TEST(CriticalTest, AlgebraicRoots) {
  CriticalReport r = run("v*(theta^2 - 2*v^2)^2 + v^9");
  EXPECT_EQ(r.p_gamma, Rational(2));
  auto subs = events(r, TraceEvent::Kind::Substitution);
  ASSERT_EQ(subs.size(), 2U);
  EXPECT_NE(subs[0]->get("field"), "Q");
  auto roots = events(r, TraceEvent::Kind::RootFound);
  EXPECT_NEAR(std::stod(roots[0]->get("approx")), -std::sqrt(2.0 / 3.0), 1e-6);
}

TEST(CriticalTest, ExactInputWithInfiniteCollapse) {
  CriticalReport r = run("v*((1-v)*theta - v)^3 + v^2");
  EXPECT_EQ(r.p_gamma, Rational(3));
  EXPECT_EQ(r.certification.to_string(), "UpToOrder(12)");
  auto c = events(r, TraceEvent::Kind::ScenarioTwoCollapse);
  ASSERT_EQ(c.size(), 1U);
  EXPECT_EQ(c[0]->get("W"), "3");
  CriticalReport exact = run("(theta - v - v^2)^3*v + v^2");
  EXPECT_EQ(exact.p_gamma, Rational(3));
  EXPECT_TRUE(exact.certification.exact);
}

TEST(CriticalTest, TruncationInsufficientKeepsTrace) {
  try {
    run("(theta + exp(v) - 1)^3*v + v^2", 6);
    FAIL();
  } catch (const CriticalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationInsufficient);
    ASSERT_FALSE(e.partial_trace().empty());
    EXPECT_EQ(e.partial_trace().front().kind, TraceEvent::Kind::InitD);
  }
}

TEST(CriticalTest, MaxDepth) {
  CriticalConfig cfg;
  cfg.max_depth = 1;
  EXPECT_EQ(compute(load_germ("(theta - v)^3*v + v^3"), cfg).p_gamma, Rational(3));
  try {
    compute(load_germ("(theta + exp(v) - 1)^3*v + v^2"), cfg);
    FAIL();
  } catch (const CriticalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MaxDepthExceeded);
    EXPECT_GE(e.partial_trace().size(), 4U);
  }
}

// Mix of sparse integer polynomials and products of shifted theta factors,
// which force substitutions, algebraic roots and star-0 edges.
std::vector<ExpandedGerm> corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> c(-2, 2), k(1, 3), b(0, 2);
  std::vector<ExpandedGerm> out;
  for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
    PuiseuxPoly g;
    if (i % 2 == 0) {
      g = testing::random_sparse(rng, 5, 7);
    } else {
      g = PuiseuxPoly::monomial(Coefficient(1), Rational(b(rng)), 0);
      for (int j = 0; j <= i % 3; ++j) {
        int r = c(rng);
        g = g * pow(PuiseuxPoly::theta() - PuiseuxPoly::monomial(Coefficient(r ? r : 1), Rational(1 + j % 2), 0), k(rng));
      }
      g = g + testing::random_sparse(rng, 2, 6);
    }
    ExpandedGerm e;
    e.poly = g;
    try {
      e = normalize(e);
    } catch (const Error&) {
      continue;
    }
    if (!classify(e).degenerate()) out.push_back(e);
  }
  return out;
}

std::vector<std::string> trace_text(const CriticalReport& r) {
  std::vector<std::string> out;
  for (const auto& e : r.trace) out.push_back(e.to_string());
  return out;
}

TEST(CriticalProperty, CorpusInvariants) {
  int with_substitution = 0;
  for (const ExpandedGerm& g : corpus(71, 80)) {
    CriticalReport r = compute(g);
    EXPECT_GE(r.p_gamma, Rational(2)) << g.poly;
    EXPECT_EQ(r.p_gamma, r.D_gamma > 2 ? r.D_gamma : Rational(2));
    Rational running = parse_rational(events(r, TraceEvent::Kind::InitD).at(0)->get("value"));
    Rational best = running;
    for (const auto* e : events(r, TraceEvent::Kind::DUpdate)) {
      Rational old = parse_rational(e->get("old")), cand = parse_rational(e->get("candidate")),
               now = parse_rational(e->get("new"));
      EXPECT_EQ(old, running);
      EXPECT_GE(now, old);
      EXPECT_EQ(now, old > cand ? old : cand);
      running = now;
      if (cand > best) best = cand;
    }
    EXPECT_EQ(best, r.D_gamma) << g.poly;
    for (const auto* e : events(r, TraceEvent::Kind::Claim54Check)) EXPECT_EQ(e->get("ok"), "true");
    if (!events(r, TraceEvent::Kind::Substitution).empty()) ++with_substitution;
    EXPECT_EQ(trace_text(compute(g)), trace_text(r));
  }
  EXPECT_GE(with_substitution, 20);
}

TEST(CriticalProperty, RescaleInvariance) {
  for (const ExpandedGerm& g : corpus(72, 60)) {
    Rational p = compute(g).p_gamma;
    for (unsigned m : {2U, 3U}) {
      ExpandedGerm s = g;
      s.poly = rescale_v(g.poly, m);
      EXPECT_EQ(compute(s).p_gamma, p) << g.poly << " m=" << m;
    }
  }
}

// One reduced vertex and no pure v-term: p0 is infinite and p_gamma = 2.
TEST(CriticalProperty, SingleVertexWithoutPureVTerm) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> pq(0, 3), qq(2, 5), c(1, 4), extra(0, 3);
  for (int i = 0; i < 60; ++i) {
    ExpandedGerm g;
    const int p = pq(rng), q = qq(rng);
    g.poly.add_term(Coefficient(c(rng)), Rational(p), q);
    for (int j = 0; j < extra(rng); ++j) g.poly.add_term(Coefficient(c(rng)), Rational(p + 1 + pq(rng)), q + pq(rng));
    if (p == 0) g.poly.add_term(Coefficient(1), Rational(1), q + 1);
    ASSERT_EQ(reduced_diagram(g.poly).vertices.size(), 1U);
    if (classify(g).degenerate()) continue;
    EXPECT_EQ(compute(g).p_gamma, Rational(2)) << g.poly;
  }
}

}  // namespace
}  // namespace nc
