#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "newton_critic/error.hpp"
#include "newton_critic/probe.hpp"
#include "test_support.hpp"

using namespace nc;

namespace {

MaxOperatorConfig small_op(unsigned v = 16, unsigned t = 32, unsigned workers = 1) {
  MaxOperatorConfig c;
  c.v_samples = v;
  c.theta_samples = t;
  c.workers = workers;
  return c;
}

// Nonnegative values on a random set of interior blocks.
GridFunction random_bump(std::mt19937_64& rng, unsigned level) {
  GridFunction f(level);
  std::uniform_int_distribution<std::size_t> pos(2, f.side() - 6), len(1, 3);
  std::uniform_real_distribution<double> val(0.0, 2.0);
  for (int b = 0; b < 6; ++b) {
    std::size_t i = pos(rng), j = pos(rng), w = len(rng), h = len(rng);
    double x = val(rng);
    for (std::size_t a = i; a < i + w; ++a)
      for (std::size_t c = j; c < j + h; ++c) f.at(a, c) += x;
  }
  return f;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::fabs(a.values()[k] - b.values()[k]));
  return m;
}

}  // namespace

TEST(GridFunctionTest, GeometryAndNorms) {
  GridFunction f(3);
  EXPECT_EQ(f.side(), 17u);
  EXPECT_DOUBLE_EQ(f.step(), 0.125);
  EXPECT_DOUBLE_EQ(f.coordinate(0), -1.0);
  EXPECT_DOUBLE_EQ(f.coordinate(16), 1.0);
  f.at(8, 8) = 2;
  EXPECT_DOUBLE_EQ(f.lp_norm(1), 2 * 0.125 * 0.125);
  EXPECT_DOUBLE_EQ(f.lp_norm(2), std::sqrt(4 * 0.125 * 0.125));
  EXPECT_DOUBLE_EQ(f.interpolate(0.0625, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.interpolate(0.0625, 0.0625), 0.5);
  EXPECT_TRUE(f.vanishes_on_boundary());
  GridFunction one = GridFunction::from(3, [](double, double) { return 1.0; });
  EXPECT_FALSE(one.vanishes_on_boundary());
  EXPECT_DOUBLE_EQ(one.interpolate(5, -7), 1.0);
}

TEST(MaxOperator, ConstantFunctionGivesTwiceEps) {
  GridFunction one = GridFunction::from(4, [](double, double) { return 1.0; });
  for (double eps : {0.25, 0.125}) {
    MaxOperatorConfig c = small_op();
    c.eps = eps;
    GridFunction m = maximal_function(Germ::from_expression("v*(1+theta^2)"), one, c);
    for (double x : m.values()) EXPECT_NEAR(x, 2 * eps, 1e-14);
    for (double p : {1.0, 2.0, 4.0})
      EXPECT_NEAR(discrete_max_operator(Germ::from_expression("v*theta"), one, eps, 8, 16, p), 2 * eps, 1e-14);
  }
}

TEST(MaxOperator, SpreadingMatchesDirectInterpolation) {
  std::mt19937_64 rng(11);
  for (const char* text : {"v*(1+theta^2)", "v*theta + theta^2", "v + v^3*theta"}) {
    Germ g = Germ::from_expression(text);
    for (int trial = 0; trial < 3; ++trial) {
      GridFunction f = random_bump(rng, 4);
      GridFunction a = maximal_function(g, f, small_op(12, 24));
      GridFunction b = maximal_function_direct(g, f, small_op(12, 24));
      EXPECT_LT(max_abs_diff(a, b), 1e-13) << text;
    }
  }
}

TEST(MaxOperator, InvalidArguments) {
  GridFunction f(3);
  f.at(8, 8) = 1;
  Germ g = Germ::from_expression("v*theta");
  MaxOperatorConfig c = small_op();
  c.eps = 0.5;
  EXPECT_THROW(maximal_function(g, f, c), Error);
  EXPECT_THROW(discrete_max_operator(g, f, 0.25, 8, 8, 0.5), Error);
  EXPECT_THROW(discrete_max_operator(g, GridFunction(3), 0.25, 8, 8, 2), Error);
}

TEST(MaxOperatorProperty, MonotoneInF) {
  std::mt19937_64 rng(5);
  Germ g = Germ::from_expression("v*(1+theta^2) + v^2*theta");
  for (int trial = 0; trial < 8; ++trial) {
    GridFunction f = random_bump(rng, 4);
    GridFunction h = random_bump(rng, 4);
    GridFunction sum = f;
    for (std::size_t k = 0; k < sum.values().size(); ++k) sum.values()[k] += h.values()[k];
    GridFunction mf = maximal_function(g, f, small_op());
    GridFunction ms = maximal_function(g, sum, small_op());
    for (std::size_t k = 0; k < mf.values().size(); ++k) EXPECT_LE(mf.values()[k], ms.values()[k] + 1e-15);
  }
}

TEST(MaxOperatorProperty, DeterministicAcrossWorkers) {
  Germ g = Germ::from_expression("v*(1+theta^2)");
  GridFunction f = line_tubes(3, 6);
  GridFunction one = maximal_function(g, f, small_op(32, 64, 1));
  GridFunction three = maximal_function(g, f, small_op(32, 64, 3));
  GridFunction again = maximal_function(g, f, small_op(32, 64, 1));
  EXPECT_EQ(one.values(), three.values());
  EXPECT_EQ(one.values(), again.values());
}

TEST(MaxOperatorProperty, QuadratureConsistency) {
  // halving the theta step moves each ratio by less than 2%
  struct Case {
    const char* germ;
    GridFunction f;
    double p;
  };
  GridFunction ball = GridFunction::from(8, [](double x, double y) { return x * x + y * y <= 1.0 / 256 ? 1.0 : 0.0; });
  std::vector<Case> cases = {{"v*(1+theta^2)", ball, 2},
                             {"v*(1+theta^2)", ball, 4},
                             {"v*theta", line_tubes(3, 7), 3},
                             {"v + v^3*theta", horizontal_tube(4, 8), 3}};
  for (const Case& c : cases) {
    Germ g = Germ::from_expression(c.germ);
    double coarse = maximal_function(g, c.f, small_op(128, 256, 0)).lp_norm(c.p) / c.f.lp_norm(c.p);
    double fine = maximal_function(g, c.f, small_op(128, 512, 0)).lp_norm(c.p) / c.f.lp_norm(c.p);
    EXPECT_LT(std::fabs(fine / coarse - 1), 0.02) << c.germ << " p=" << c.p;
  }
}

TEST(SlopeFit, ExactLine) {
  double r = 1;
  EXPECT_NEAR(least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7}, &r), 2.0, 1e-15);
  EXPECT_NEAR(r, 0.0, 1e-14);
  EXPECT_THROW(least_squares_slope({1}, {1}), Error);
  EXPECT_THROW(least_squares_slope({1, 1}, {0, 2}), Error);
}

TEST(KnappProbe, SlopesOnReducedGrid) {
  KnappConfig c;
  c.grid_level = 8;
  c.op.v_samples = 128;
  c.op.theta_samples = 256;
  Germ g = Germ::from_expression("v*(1+theta^2)");
  for (double p : {2.0, 4.0}) {
    ProbeReport r = knapp_probe(g, p, default_knapp_deltas(), c);
    ASSERT_EQ(r.ratios.size(), 4u);
    EXPECT_EQ(r.fit_from, 2u);
    EXPECT_EQ(r.predicted_slope, Rational(1) - Rational(2) / Rational(static_cast<long>(p)));
    EXPECT_TRUE(r.within_tolerance) << "p=" << p << " slope " << r.fitted_slope;
  }
}

TEST(KnappProbe, RejectsVanishingJacobian) {
  try {
    knapp_probe(Germ::from_expression("theta^2 + theta^3"), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
  }
  Germ opaque;
  opaque.eval = [](double, double t) { return std::sin(t); };
  EXPECT_THROW(knapp_probe(opaque, 2), Error);
  EXPECT_THROW(knapp_probe(Germ::from_expression("v*theta"), 2, {0.1, 0.05}), Error);
}

TEST(ScalingProbe, SetupValues) {
  ScalingSetup a = scaling_setup(nc::testing::germ("v*(1+theta^3)"), Rational(1, 8));
  EXPECT_EQ(a.p0, Rational(1));
  EXPECT_EQ(a.vertex.p, Rational(1));
  EXPECT_EQ(a.vertex.q, 3u);
  EXPECT_EQ(a.mu, Rational(0));
  EXPECT_EQ(a.d, Rational(3));
  EXPECT_EQ(a.exponent, Rational(3));

  ScalingSetup b = scaling_setup(nc::testing::germ("v*theta^4 + v^3*theta + v^2"), Rational(1, 8));
  EXPECT_EQ(b.p0, Rational(2));
  EXPECT_EQ(b.vertex.p, Rational(1));
  EXPECT_EQ(b.vertex.q, 4u);
  EXPECT_EQ(b.mu, Rational(3, 2));
  EXPECT_EQ(b.d, Rational(5, 2));
  EXPECT_EQ(b.exponent, Rational(19, 8));

  EXPECT_THROW(scaling_setup(nc::testing::germ("theta^2 + v*theta^3"), Rational(1, 8)), Error);
  try {
    scaling_setup(nc::testing::germ("v + v^3*theta"), Rational(1, 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundedDistance);
  }
}

TEST(ScalingProbe, MeasuredSlopeMatchesPrediction) {
  ScalingConfig c;
  c.grid_level = 8;
  c.op.theta_samples = 256;
  c.log2_heights = {2, 3, 4, 5};
  for (const char* text : {"v*(1+theta^3)", "v*theta^4 + v^3*theta + v^2"}) {
    ProbeReport r = scaling_probe(nc::testing::germ(text), 2, c);
    EXPECT_TRUE(r.within_tolerance) << text << ": " << r.fitted_slope << " vs " << to_string(r.predicted_slope);
  }
}

TEST(BlowupProbe, TubeFamilies) {
  GridFunction lines = line_tubes(3, 6);
  EXPECT_TRUE(lines.vanishes_on_boundary());
  EXPECT_GT(lines.lp_norm(1), 0);
  // Union area shrinks with the number of directions.
  double a3 = line_tubes(3, 8).lp_norm(1), a5 = line_tubes(5, 8).lp_norm(1);
  EXPECT_LT(a5, a3);
  GridFunction tube = horizontal_tube(4, 7);
  EXPECT_NEAR(tube.lp_norm(1), 0.5 * (1.0 / 16), 0.5 * 2 * tube.step());
}

TEST(BlowupProbe, CaseThreeGrowsWithHorizontalTubes) {
  ExpandedGerm g = load_germ("v + v^3*theta");
  BlowupConfig c;
  c.extra_levels = 3;
  BlowupReport r = degenerate_blowup_probe(g, Germ::from_expression("v + v^3*theta"), 3, c);
  EXPECT_EQ(r.family, "horizontal");
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.degenerate_case, 3);
  ASSERT_EQ(r.ratios.size(), 3u);
  ASSERT_EQ(r.growth.size(), 2u);
  EXPECT_TRUE(r.increasing);
  for (double x : r.growth) EXPECT_GT(x, 1.05);
}

TEST(BlowupProbe, ReportShapeAndErrors) {
  Germ g = Germ::from_expression("v*theta");
  EXPECT_THROW(blowup_probe(g, TubeFamily::Lines, 2), Error);
  ExpandedGerm control = load_germ("v*(1+theta^2)");
  BlowupConfig c;
  c.first = 2;
  c.extra_levels = 3;
  BlowupReport r = degenerate_blowup_probe(control, Germ::from_expression("v*(1+theta^2)"), 3, c);
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.family, "lines");
  EXPECT_EQ(r.refinements, (std::vector<unsigned>{2, 3, 4}));
  EXPECT_EQ(r.widths, (std::vector<double>{0.25, 0.125, 0.0625}));
  EXPECT_GE(r.max_over_min, 1.0);
}

TEST(ProbeOutput, Tsv) {
  ProbeReport r;
  r.parameter_name = "delta";
  r.parameters = {0.5, 0.25};
  r.ratios = {1, 2};
  std::ostringstream os;
  write_tsv(os, r);
  EXPECT_EQ(os.str(), "delta\tratio\n0.5\t1\n0.25\t2\n");
  BlowupReport b;
  b.refinements = {3};
  b.widths = {0.125};
  b.ratios = {0.5};
  std::ostringstream bs;
  write_tsv(bs, b);
  EXPECT_EQ(bs.str(), "k\twidth\tratio\n3\t0.125\t0.5\n");
}
