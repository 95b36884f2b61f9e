#include <gtest/gtest.h>

#include <random>

#include "newton_critic/newton.hpp"
#include "test_support.hpp"

namespace nc {
namespace {

using testing::germ;

ExponentPair ep(long p, unsigned q) { return ExponentPair{Rational(p), q}; }

TEST(NewtonTest, TaylorSupport) {
  SupportSet s = taylor_support(germ("(theta - v)^3 * v + v^3"));
  SupportSet expected{ep(1, 3), ep(2, 2), ep(3, 0), ep(3, 1), ep(4, 0)};
  EXPECT_EQ(s, expected);
  EXPECT_EQ(taylor_support(germ("v*theta")), (SupportSet{ep(1, 1)}));
  EXPECT_EQ(taylor_support(germ("v + v*theta^2")), (SupportSet{ep(1, 0), ep(1, 2)}));
}

TEST(NewtonTest, DiagramExamples) {
  NewtonDiagram d = reduced_diagram(germ("(theta - v)^3 * v + v^3"));
  ASSERT_EQ(d.vertices.size(), 2u);
  EXPECT_EQ(d.vertices[0], ep(1, 3));
  EXPECT_EQ(d.vertices[1], ep(3, 1));
  ASSERT_EQ(d.edges.size(), 1u);
  EXPECT_EQ(d.edges[0].slope, Rational(1));

  NewtonDiagram d2 = reduced_diagram(germ("v*(1 + theta^2)"));
  ASSERT_EQ(d2.vertices.size(), 1u);
  EXPECT_EQ(d2.vertices[0], ep(1, 2));

  NewtonDiagram d3 = reduced_diagram(germ("theta^2 + v*theta^5"));
  ASSERT_EQ(d3.vertices.size(), 1u);
  EXPECT_EQ(d3.vertices[0], ep(0, 2));

  try {
    reduced_diagram(germ("v^2 + v^3"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyReducedSupport);
  }
}

TEST(NewtonTest, CollinearPointsAreNotVertices) {
  NewtonDiagram d = reduced_diagram(germ("theta^3 + v*theta^2 + v^2*theta"));
  ASSERT_EQ(d.vertices.size(), 2u);
  EXPECT_EQ(d.vertices[1], ep(2, 1));
}

TEST(NewtonTest, P0) {
  EXPECT_EQ(p0(germ("(theta - v)^3 * v + v^3")), ExtRational(Rational(3)));
  EXPECT_TRUE(p0(germ("theta^2 + v*theta^3")).is_infinite());
  EXPECT_EQ(p0(expand(parse("v*(exp(theta)-1) + v^2"), 8).poly), ExtRational(Rational(2)));
}

TEST(NewtonTest, VerticalDistance) {
  EXPECT_EQ(vertical_distance(Line{1, 1, 2}, Rational(3)), Rational(0));
  EXPECT_EQ(vertical_distance(Line{2, 1, 4}, Rational(1)), Rational(2));
  EXPECT_EQ(vertical_distance(Line{2, 1, 4}, ExtRational::infinity()), Rational(0));
}

TEST(NewtonTest, VertexSupDistance) {
  NewtonDiagram d1 = reduced_diagram(germ("(theta - v)^3 * v + v^3"));
  EXPECT_EQ(vertex_sup_distance(d1, ep(3, 1), Rational(3)), ExtRational(Rational(1)));
  EXPECT_EQ(d_gamma(germ("(theta - v)^3 * v + v^3")), ExtRational(Rational(1)));
  NewtonDiagram d2 = diagram({ep(1, 3), ep(3, 1)}, true);
  EXPECT_EQ(vertex_sup_distance(d2, ep(3, 1), Rational(2)), ExtRational(Rational(2)));
  for (unsigned k = 2; k <= 6; ++k) {
    NewtonDiagram dk = diagram({ep(1, 0), ep(1, k)}, true);
    EXPECT_EQ(vertex_sup_distance(dk, ep(1, k), Rational(1)), ExtRational(Rational(k)));
  }
  NewtonDiagram d3 = reduced_diagram(germ("v + v^3*theta"));
  try {
    vertex_sup_distance(d3, ep(3, 1), Rational(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundedDistance);
  }
}

TEST(NewtonTest, DistanceAboveVertex) {
  EXPECT_EQ(d_gt(germ("theta^3*v + v^3"), ep(1, 3)), ExtRational(Rational(3)));
  // intermediate germ of the second worked example, truncated to its relevant part
  PuiseuxPoly g = germ("v*theta^3 + 3/2*v^3*theta^2 + 3/4*v^5*theta + v^2");
  EXPECT_EQ(d_gt(g, ep(1, 3)), ExtRational(Rational(5, 2)));
  EXPECT_EQ(d_gt(germ("theta^2 + v^5*theta"), ep(0, 2)), ExtRational(Rational(0)));
}

TEST(NewtonProperty, DualDistanceAndSeparation) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 200; ++i) {
    std::uniform_int_distribution<int> nterms(3, 6);
    ExpandedGerm e;
    e.poly = testing::random_sparse(rng, nterms(rng), 8);
    ExpandedGerm g;
    try {
      g = normalize(e);
    } catch (const Error&) {
      continue;
    }
    NewtonDiagram d = reduced_diagram(g.poly);
    EXPECT_TRUE(separates(d, taylor_support(g.poly)));
    for (std::size_t k = 1; k < d.edges.size(); ++k) EXPECT_LT(d.edges[k - 1].slope, d.edges[k].slope);
    ExtRational p = p0(g.poly);
    if (p.is_infinite() || p.value() < d.vertices.front().p) continue;
    ++checked;
    ExtRational tangent = d_gamma(d, p);
    EXPECT_EQ(tangent, entry_height(d, p.value())) << g.poly;
    for (unsigned m = 2; m <= 4; ++m) EXPECT_EQ(d_gamma(rescale_v(g.poly, m)), tangent);
  }
  EXPECT_GE(checked, 50);
}

}  // namespace
}  // namespace nc
