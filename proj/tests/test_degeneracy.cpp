#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "newton_critic/degeneracy.hpp"
#include "test_support.hpp"

namespace nc {
namespace {

using testing::germ;

Classification cls(const char* text, unsigned order = kDefaultOrder) { return classify(load_germ(text, order)); }

TEST(CurvatureTest, Examples) {
  EXPECT_TRUE(cinematic_curvature(germ("v*theta")).is_zero());
  EXPECT_EQ(cinematic_curvature(germ("v + v*theta^2")), germ("4*v"));
  EXPECT_EQ(cinematic_curvature(germ("theta^2 + v*theta^3")), germ("12*theta + 18*v*theta^2"));
}

TEST(ClassifyTest, AcceptanceExamples) {
  EXPECT_EQ(cls("v*theta").degenerate_case, 1);
  Classification e = cls("v*(exp(theta)-1)");
  EXPECT_EQ(e.degenerate_case, 1);
  EXPECT_FALSE(e.certification.exact);
  EXPECT_EQ(e.certification.to_string(), "UpToOrder(12)");
  Classification c2 = cls("v*theta + v^2*theta^2");
  EXPECT_EQ(c2.degenerate_case, 2);
  ASSERT_TRUE(c2.vertex.has_value());
  EXPECT_EQ(*c2.vertex, (ExponentPair{Rational(1), 1}));
  EXPECT_EQ(c2.tilde, germ("v*theta"));
  EXPECT_TRUE(c2.certification.exact);
  EXPECT_EQ(cls("v*(exp(theta)-1) + v^2*theta").degenerate_case, 2);
  Classification c3 = cls("v + v^3*theta");
  EXPECT_EQ(c3.degenerate_case, 3);
  EXPECT_EQ(*c3.exponent, Rational(1));
  EXPECT_EQ(c3.tilde, germ("v^3*theta"));
  EXPECT_EQ(c3.satisfied_cases, (std::vector<int>{1, 2, 3}));
  EXPECT_FALSE(cls("v*(1 + theta^2)").degenerate());
  EXPECT_FALSE(cls("theta^2 + v*theta^3").degenerate());
  EXPECT_FALSE(cls("(theta - v)^3 * v + v^3").degenerate());
}

TEST(GeometricTest, Examples) {
  EXPECT_TRUE(geometric_sequence_test(load_germ("v*(exp(theta)-1)")));
  EXPECT_TRUE(geometric_sequence_test(load_germ("v*theta")));
  EXPECT_FALSE(geometric_sequence_test(load_germ("v*theta + v*theta^3")));
  EXPECT_FALSE(geometric_sequence_test(load_germ("v*theta + v*theta^2")));
  EXPECT_TRUE(geometric_sequence_test(load_germ("3*v^2*(exp(2*theta)-1) + v^3*theta^2")));
  EXPECT_THROW(geometric_sequence_test(load_germ("v*theta^2 + v^2*theta")), Error);
}

// Single-vertex column: geometric coefficients and vanishing curvature of gamma~ agree.
TEST(DegeneracyProperty, GeometricTestMatchesCurvature) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> c(-3, 3), len(1, 5), pe(1, 3);
  for (int i = 0; i < 200; ++i) {
    ExpandedGerm g;
    int p = pe(rng);
    g.poly.add_term(Coefficient(1 + i % 3), Rational(p), 1);
    int n = len(rng);
    bool make_geometric = i % 2 == 0;
    Rational ratio(c(rng), 1 + i % 2);
    for (int k = 2; k <= n; ++k) {
      Rational ak = make_geometric ? Rational((1 + i % 3) * pow(ratio, k - 1) / factorial(k)) : Rational(c(rng));
      g.poly.add_term(Coefficient(ak), Rational(p), static_cast<unsigned>(k));
    }
    g.poly.add_term(Coefficient(1), Rational(p + 1), 2);
    bool geometric = geometric_sequence_test(g);
    PuiseuxPoly tilde = filter_terms(g.poly, [&](const ExponentPair& e) { return e.p == p; });
    EXPECT_EQ(geometric, cinematic_curvature(tilde).is_zero()) << g.poly;
  }
}

TEST(DegeneracyProperty, CurvatureMatchesFiniteDifferences) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.001, 0.05);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    PuiseuxPoly g = testing::random_sparse(rng, 5, 6);
    PuiseuxPoly cine = cinematic_curvature(g);
    if (cine.is_zero()) continue;
    auto fl = [&](long double v, long double t) {
      long double sum = 0;
      for (const auto& [e, c] : g.terms()) sum += c.to_double() * std::pow(v, (long double)to_double(e.p)) * std::pow(t, (long double)e.q);
      return sum;
    };
    for (int j = 0; j < 20; ++j) {
      long double v = u(rng), t = u(rng);
      auto estimate = [&](long double h) {
        auto dt = [&](long double vv, long double tt, int order) -> long double {
          switch (order) {
            case 1: return (fl(vv, tt + h) - fl(vv, tt - h)) / (2 * h);
            case 2: return (fl(vv, tt + h) - 2 * fl(vv, tt) + fl(vv, tt - h)) / (h * h);
            default:
              return (fl(vv, tt + 2 * h) - 2 * fl(vv, tt + h) + 2 * fl(vv, tt - h) - fl(vv, tt - 2 * h)) / (2 * h * h * h);
          }
        };
        long double gtt = dt(v, t, 2), gttt = dt(v, t, 3);
        long double gvt = (dt(v + h, t, 1) - dt(v - h, t, 1)) / (2 * h);
        long double gvtt = (dt(v + h, t, 2) - dt(v - h, t, 2)) / (2 * h);
        return std::pair{gtt * gvtt - gttt * gvt, std::abs(gtt * gvtt) + std::abs(gttt * gvt)};
      };
      auto [coarse, mag] = estimate(4e-4L);
      long double fd = (4 * estimate(2e-4L).first - coarse) / 3;
      double exact = evaluate_precise(cine, double(v), double(t));
      double scale = std::abs(exact) + 1e-3 * double(mag);
      EXPECT_NEAR(double(fd), exact, 1e-4 * scale + 1e-6) << g;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(DegeneracyProperty, InvariantUnderScaling) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 100; ++i) {
    ExpandedGerm e;
    e.poly = testing::random_sparse(rng, 4, 6);
    ExpandedGerm g;
    try {
      g = normalize(e);
    } catch (const Error&) {
      continue;
    }
    ExpandedGerm s = g;
    s.poly = Coefficient(Rational(-7, 3)) * g.poly;
    Classification a = classify(g), b = classify(s);
    EXPECT_EQ(a.degenerate_case, b.degenerate_case);
    EXPECT_EQ(a.satisfied_cases, b.satisfied_cases);
  }
}

}  // namespace
}  // namespace nc
