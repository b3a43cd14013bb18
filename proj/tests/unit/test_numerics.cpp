#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <cmath>

#include "biortho/errors.hpp"
#include "biortho/precision.hpp"
#include "biortho/quadrature.hpp"
#include "biortho/roots.hpp"
#include "biortho/theta.hpp"
#include "generators.hpp"

namespace biortho {
namespace {

using testing::Gen;
using testing::kPropertyCases;

const double kPi = boost::math::constants::pi<double>();

TEST(Semiaxis, ExponentialMoments) {
  QuadratureSpec spec;
  EXPECT_NEAR(integrate_semiaxis<double>([](double x) { return std::exp(-x); }, spec), 1.0, 1e-12);
  EXPECT_NEAR(integrate_semiaxis<double>([](double x) { return x * x * x * std::exp(-x); }, spec), 6.0, 1e-11);
  EXPECT_NEAR(integrate_semiaxis<double>([](double x) { return std::sqrt(x) * std::exp(-x); }, spec),
              std::sqrt(kPi) / 2, 1e-12);
}

TEST(Semiaxis, FactorialsAt256Bits) {
  PrecisionContext ctx;
  PrecisionGuard guard(ctx);
  Real factorial(1);
  for (int k = 0; k <= 40; ++k) {
    if (k > 0) factorial *= k;
    Real got = integrate_semiaxis<Real>([k](const Real& x) { return pow(x, k) * exp(-x); },
                                        QuadratureSpec::for_context(ctx));
    EXPECT_LT(to_double(abs(got / factorial - 1)), 1e-28) << "k=" << k;
  }
}

TEST(Semiaxis, GammaAtRandomExponents) {
  Gen gen(11);
  QuadratureSpec spec;
  for (int i = 0; i < kPropertyCases; ++i) {
    double s = gen.uniform(-0.9, 12.0);
    double got = integrate_semiaxis<double>([s](double x) { return std::pow(x, s) * std::exp(-x); }, spec);
    EXPECT_LT(std::abs(got / std::tgamma(s + 1) - 1), 1e-10) << "s=" << s;
  }
}

TEST(Interval, SchemesAgreeOnPolynomials) {
  Gen gen(12);
  for (int i = 0; i < 20; ++i) {
    double a = gen.uniform(-3, 1), b = a + gen.uniform(0.1, 4);
    double c0 = gen.uniform(-1, 1), c1 = gen.uniform(-1, 1), c2 = gen.uniform(-1, 1);
    auto f = [&](double x) { return c0 + x * (c1 + x * c2); };
    auto F = [&](double x) { return x * (c0 + x * (c1 / 2 + x * c2 / 3)); };
    double exact = F(b) - F(a);
    for (auto scheme : {QuadratureScheme::tanh_sinh, QuadratureScheme::gauss_legendre_panels}) {
      QuadratureSpec spec;
      spec.scheme = scheme;
      EXPECT_NEAR(integrate_interval<double>(f, a, b, spec), exact, 1e-11);
    }
  }
}

TEST(Interval, GaussLaguerreIsExactForPolynomialTimesWeight) {
  QuadratureSpec spec;
  spec.scheme = QuadratureScheme::gauss_laguerre;
  spec.laguerre_alpha = 0.5;
  double got = integrate_gauss_laguerre<double>(
      [](double x) { return x * x * std::sqrt(x) * std::exp(-x); }, spec);
  EXPECT_NEAR(got, std::tgamma(3.5), 1e-12);
}

TEST(LogSingular, SpecExamples) {
  QuadratureSpec spec;
  auto log_dist = [](double y) { return std::log(std::abs(y - 0.5)); };
  EXPECT_NEAR(integrate_log_singular<double>(log_dist, 0.0, 1.0, 0.5, spec), -1 - std::log(2.0), 1e-12);
  EXPECT_NEAR(integrate_log_singular<double>([](double) { return 1.0; }, 0.0, 1.0, 0.5, spec), 1.0, 1e-13);
  EXPECT_NEAR(integrate_log_singular<double>([](double y) { return std::log(y); }, 0.0, 1.0, 0.0, spec), -1.0,
              1e-12);
}

TEST(LogSingular, GradedPanelsMatchClosedForm) {
  QuadratureSpec spec;
  spec.scheme = QuadratureScheme::gauss_legendre_panels;
  spec.abs_tol = spec.rel_tol = 1e-12;
  Gen gen(13);
  for (int i = 0; i < 20; ++i) {
    double x0 = gen.uniform(0.05, 0.95);
    auto f = [x0](double y) { return std::log(std::abs(y - x0)); };
    double exact = x0 * std::log(x0) + (1 - x0) * std::log(1 - x0) - 1;
    EXPECT_NEAR(integrate_log_singular<double>(f, 0.0, 1.0, x0, spec), exact, 1e-10) << "x0=" << x0;
  }
}

TEST(LogSingular, AgreesWithUnsplitRuleOnSmoothIntegrands) {
  QuadratureSpec spec;
  Gen gen(14);
  for (int i = 0; i < kPropertyCases; ++i) {
    double k = gen.uniform(0.1, 3.0), x0 = gen.uniform(-1.0, 2.0);
    auto f = [k](double y) { return std::cos(k * y) * std::exp(-y); };
    double split = integrate_log_singular<double>(f, -1.0, 2.0, x0, spec);
    double whole = tanh_sinh<double>(f, -1.0, 2.0, spec);
    EXPECT_LE(std::abs(split - whole), 10 * spec.rel_tol * std::max(1.0, std::abs(whole)));
  }
}

TEST(Quadrature, RejectsBadSpecs) {
  QuadratureSpec spec;
  spec.rel_tol = 0;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  QuadratureSpec ok;
  EXPECT_THROW(integrate_log_singular<double>([](double) { return 1.0; }, 1.0, 0.0, 0.5, ok), InvalidArgument);
}

TEST(Quadrature, ReportsNonConvergence) {
  QuadratureSpec spec;
  spec.max_levels = 2;
  spec.abs_tol = spec.rel_tol = 1e-15;
  auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  EXPECT_THROW(tanh_sinh<double>(wild, 0.0, 1.0, spec), NonConvergence);
}

TEST(Roots, SpecExamples) {
  EXPECT_NEAR(find_root_monotone([](double x) { return x - 2; }, 0, 5, 1e-14), 2.0, 1e-13);
  EXPECT_NEAR(find_root_monotone([](double x) { return x * x * x - 8; }, 0, 5, 1e-14), 2.0, 1e-13);
}

TEST(Roots, ExpandsBracketAndFailsWithoutSignChange) {
  EXPECT_NEAR(find_root_monotone([](double x) { return x - 100; }, 0, 1, 1e-12), 100.0, 1e-10);
  EXPECT_THROW(find_root_monotone([](double x) { return x * x + 1; }, 0, 1, 1e-12), BracketFailure);
  EXPECT_THROW(find_root_monotone([](double x) { return x; }, 1, 0, 1e-12), InvalidArgument);
}

TEST(Roots, RootIsStableUnderBracketChoice) {
  Gen gen(15);
  for (int i = 0; i < kPropertyCases; ++i) {
    double root = gen.uniform(0.1, 10), p = gen.uniform(1, 5);
    auto f = [&](double x) { return std::pow(x, p) - std::pow(root, p); };
    double lo = gen.uniform(0, root * 0.9), hi = gen.uniform(root * 1.1, root * 20);
    EXPECT_NEAR(find_root_monotone(f, lo, hi, 1e-14), root, 1e-10 * root);
  }
}

TEST(Solve2d, SpecExamples) {
  Vec2 a = solve_2d([](Vec2 v) { return Vec2{v[0] - 1, v[1] - 2}; }, {0, 0}, 1e-12);
  EXPECT_NEAR(a[0], 1, 1e-12);
  EXPECT_NEAR(a[1], 2, 1e-12);
  Vec2 b = solve_2d([](Vec2 v) { return Vec2{v[0] * v[0] - 4, v[0] * v[1] - 3}; }, {1, 1}, 1e-12);
  EXPECT_NEAR(b[0], 2, 1e-10);
  EXPECT_NEAR(b[1], 1.5, 1e-10);
}

TEST(Solve2d, FailsOnSingularSystem) {
  EXPECT_THROW(solve_2d([](Vec2 v) { return Vec2{v[0] + v[1] - 1, 2 * (v[0] + v[1]) + 3}; }, {0, 0}, 1e-12),
               NoConvergence);
}

TEST(NewtonComplex, SpecExamples) {
  Complex i(0, 1);
  Complex r1 = newton_complex([](Complex s) { return s * s + 1.0; }, [](Complex s) { return 2.0 * s; },
                              {0.5, 0.8}, 1e-14);
  EXPECT_LT(std::abs(r1 - i), 1e-13);
  Complex r2 = newton_complex([](Complex s) { return s * s * s - 1.0; }, [](Complex s) { return 3.0 * s * s; },
                              {-0.4, 0.9}, 1e-14);
  EXPECT_LT(std::abs(r2 - std::exp(2.0 * kPi / 3 * i)), 1e-13);
}

TEST(NewtonComplex, DegenerateDerivative) {
  EXPECT_THROW(newton_complex([](Complex s) { return s * s + 1.0; }, [](Complex s) { return 2.0 * s; }, {0, 0}, 1e-14),
               DegenerateDerivative);
}

TEST(NewtonComplex, FindsRootsOfUnity) {
  Gen gen(16);
  for (int i = 0; i < kPropertyCases; ++i) {
    int n = gen.integer(2, 7);
    Complex guess = std::polar(gen.uniform(0.8, 1.2), gen.uniform(-kPi, kPi));
    Complex r = newton_complex([n](Complex s) { return std::pow(s, n) - 1.0; },
                               [n](Complex s) { return double(n) * std::pow(s, n - 1); }, guess, 1e-13);
    EXPECT_NEAR(std::abs(r), 1.0, 1e-12);
    EXPECT_LT(std::abs(std::pow(r, n) - 1.0), 1e-12);
  }
}

TEST(Precision, GuardRestoresDefault) {
  unsigned before = Real::default_precision();
  {
    PrecisionContext ctx;
    ctx.mantissa_bits = 512;
    PrecisionGuard guard(ctx);
    EXPECT_GE(Real::default_precision(), 150u);
  }
  EXPECT_EQ(Real::default_precision(), before);
}

TEST(Precision, EpsilonMatchesBits) {
  PrecisionContext ctx;
  ctx.mantissa_bits = 128;
  PrecisionGuard guard(ctx);
  EXPECT_EQ(to_double(log2(ctx.epsilon())), -127.0);
  PrecisionContext bad;
  bad.mantissa_bits = 10;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Theta, ParsesFractionsIntegersAndDecimals) {
  Theta half = Theta::parse("3/2");
  ASSERT_TRUE(half.is_rational());
  EXPECT_EQ(half.fraction()->a, 3);
  EXPECT_EQ(half.fraction()->b, 2);
  Theta reduced = Theta::parse("4/2");
  EXPECT_EQ(reduced.fraction()->a, 2);
  EXPECT_EQ(reduced.fraction()->b, 1);
  EXPECT_TRUE(Theta::parse("2").is_rational());
  Theta dec = Theta::parse("1.7");
  EXPECT_FALSE(dec.is_rational());
  EXPECT_DOUBLE_EQ(dec.value(), 1.7);
  EXPECT_THROW(Theta::parse("1/0"), InvalidArgument);
  EXPECT_THROW(Theta::parse("abc"), InvalidArgument);
}

}  // namespace
}  // namespace biortho
