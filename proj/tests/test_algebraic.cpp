#include <gtest/gtest.h>

#include <random>

#include "newton_critic/algebraic.hpp"

namespace nc {
namespace {

constexpr int kIterations = 200;

QPoly random_qpoly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree), coef(-6, 6);
  std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : c) x = coef(rng);
  return QPoly(std::move(c));
}

TEST(QPolyTest, DivmodReconstructs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < kIterations; ++i) {
    QPoly a = random_qpoly(rng, 7), b = random_qpoly(rng, 4);
    if (b.is_zero()) continue;
    auto [q, r] = divmod(a, b);
    EXPECT_TRUE(q * b + r == a);
    EXPECT_LT(r.degree(), b.degree());
  }
}

TEST(QPolyTest, SquareFreeDecompositionMultiplies) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < kIterations; ++i) {
    QPoly a = random_qpoly(rng, 3), b = random_qpoly(rng, 2);
    if (a.degree() < 1 || b.degree() < 1) continue;
    QPoly f = a * pow(b, 3);
    auto parts = square_free_decomposition(f);
    QPoly prod = QPoly::constant(f.leading());
    for (std::size_t k = 0; k < parts.size(); ++k) prod = prod * pow(parts[k], static_cast<unsigned>(k + 1));
    EXPECT_TRUE(prod == f);
  }
}

TEST(QPolyTest, ResultantDetectsCommonRoot) {
  QPoly a = qpoly_from_ints({-2, 0, 1});  // x^2 - 2
  QPoly b = qpoly_from_ints({-3, 0, 1});
  EXPECT_EQ(resultant(a, b), Rational(1));
  EXPECT_EQ(resultant(a, a * b), Rational(0));
  // Res(x - 1, x - 3) = 1 - 3
  EXPECT_EQ(resultant(qpoly_from_ints({-1, 1}), qpoly_from_ints({-3, 1})), Rational(-2));
}

TEST(QPolyTest, InterpolationRoundTrip) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    QPoly f = random_qpoly(rng, 6);
    std::vector<Rational> xs, ys;
    for (int k = 0; k <= 6; ++k) {
      xs.emplace_back(k - 3);
      ys.push_back(f.evaluate(xs.back()));
    }
    EXPECT_TRUE(interpolate(xs, ys) == f);
  }
}

TEST(RealRootsTest, RationalAndIrrational) {
  // (x - 1/2)^2 (x^2 - 2)
  QPoly f = pow(QPoly(std::vector<Rational>{Rational(-1, 2), Rational(1)}), 2) * qpoly_from_ints({-2, 0, 1});
  auto roots = real_roots(f);
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0].value.to_double(), -1.41421356237, 1e-10);
  EXPECT_TRUE(roots[1].value.is_rational());
  EXPECT_EQ(roots[1].value.rational_value(), Rational(1, 2));
  EXPECT_EQ(roots[1].multiplicity, 2u);
  EXPECT_NEAR(roots[2].value.to_double(), 1.41421356237, 1e-10);
}

TEST(RealRootsTest, RootsVanishNumerically) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < kIterations; ++i) {
    QPoly f = random_qpoly(rng, 6);
    if (f.degree() < 1) continue;
    auto roots = real_roots(f);
    for (std::size_t k = 0; k + 1 < roots.size(); ++k) EXPECT_LT(compare(roots[k].value, roots[k + 1].value), 0);
    double scale = 0;
    for (const auto& c : f.coeffs()) scale += std::abs(c.get_d());
    for (const auto& r : roots) {
      double x = r.value.to_double(), acc = 0;
      for (std::size_t k = f.size(); k-- > 0;) acc = acc * x + f.coeffs()[k].get_d();
      EXPECT_NEAR(acc, 0.0, 1e-6 * scale * std::max(1.0, std::pow(std::abs(x), f.degree())));
    }
  }
}

TEST(NumberFieldTest, ArithmeticInSqrt2) {
  auto roots = real_roots(qpoly_from_ints({-2, 0, 1}));
  auto k = std::make_shared<const NumberField>(roots[1].value);
  Coefficient a = Coefficient::generator(k);
  EXPECT_TRUE((a * a - Coefficient(2)).is_zero());
  EXPECT_TRUE((a * a).is_rational());
  EXPECT_EQ(a.sign(), 1);
  EXPECT_EQ((Coefficient(Rational(14142, 10000)) - a).sign(), -1);
  Coefficient b = Coefficient(1) + a;
  EXPECT_NEAR((Coefficient(1) / b).to_double(), 1.0 / (1.0 + std::sqrt(2.0)), 1e-14);
  EXPECT_THROW(Coefficient(0).inverse(), Error);
}

TEST(NumberFieldTest, ReducibleModulusZeroTest) {
  // alpha = sqrt2 presented by (x^2-2)(x^2-3)
  QPoly m = qpoly_from_ints({-2, 0, 1}) * qpoly_from_ints({-3, 0, 1});
  auto roots = real_roots(m);
  AlgebraicReal sqrt2 = roots[2].value;
  EXPECT_NEAR(sqrt2.to_double(), std::sqrt(2.0), 1e-12);
  auto k = std::make_shared<const NumberField>(sqrt2);
  Coefficient a = Coefficient::generator(k);
  Coefficient z = a * a - Coefficient(2);
  EXPECT_TRUE(z.is_zero());
  Coefficient w = a * a - Coefficient(3);
  EXPECT_FALSE(w.is_zero());
  EXPECT_NEAR(w.inverse().to_double(), -1.0, 1e-14);
}

TEST(NumberFieldTest, RootsOverExtension) {
  auto roots = real_roots(qpoly_from_ints({-2, 0, 1}));
  auto k = std::make_shared<const NumberField>(roots[1].value);
  Coefficient a = Coefficient::generator(k);
  // (x - a)^2 (x^2 - 3): one root in K with multiplicity 2, two outside it
  KPoly f = pow(KPoly(std::vector<Coefficient>{-a, Coefficient(1)}), 2) * to_kpoly(qpoly_from_ints({-3, 0, 1}));
  auto rr = real_roots(f);
  ASSERT_EQ(rr.size(), 3u);
  EXPECT_NEAR(rr[0].value.to_double(), -std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(rr[1].value.to_double(), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(rr[1].multiplicity, 2u);
  ASSERT_TRUE(rr[1].in_field);
  EXPECT_TRUE((*rr[1].in_field - a).is_zero());
  EXPECT_NEAR(rr[2].value.to_double(), std::sqrt(3.0), 1e-12);
}

TEST(NumberFieldTest, AdjoinPrimitiveElement) {
  auto r2 = real_roots(qpoly_from_ints({-2, 0, 1}))[1].value;
  auto r3 = real_roots(qpoly_from_ints({-3, 0, 1}))[1].value;
  auto k = std::make_shared<const NumberField>(r2);
  Adjunction adj = adjoin(k, r3);
  Coefficient s2 = adj.lift(Coefficient::generator(k));
  EXPECT_TRUE((s2 * s2 - Coefficient(2)).is_zero());
  EXPECT_TRUE((adj.beta * adj.beta - Coefficient(3)).is_zero());
  EXPECT_NEAR((s2 * adj.beta).to_double(), std::sqrt(6.0), 1e-13);
  EXPECT_EQ((s2 - adj.beta).sign(), -1);
}

TEST(NumberFieldTest, IncompatibleFieldsRejected) {
  auto r2 = real_roots(qpoly_from_ints({-2, 0, 1}))[1].value;
  auto r3 = real_roots(qpoly_from_ints({-3, 0, 1}))[1].value;
  Coefficient a = Coefficient::generator(std::make_shared<const NumberField>(r2));
  Coefficient b = Coefficient::generator(std::make_shared<const NumberField>(r3));
  try {
    (void)(a + b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompatibleFields);
  }
}

}  // namespace
}  // namespace nc
