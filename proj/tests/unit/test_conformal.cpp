#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <sstream>

#include "biortho/conformal.hpp"
#include "biortho/errors.hpp"
#include "generators.hpp"

namespace biortho {
namespace {

using testing::Gen;
using testing::kPropertyCases;

const double kPi = boost::math::constants::pi<double>();

double hard_right_edge(double theta, double c) { return c * std::pow(1 + theta, 1 + 1 / theta) / theta; }

TEST(Map, HardExamples) {
  auto m = ConformalMap::hard(2, 2);
  EXPECT_NEAR(std::abs(map_eval(m, 1.0, 0) - 4 * std::sqrt(2.0)), 0, 1e-14);
  Gen gen(51);
  for (int i = 0; i < kPropertyCases; ++i) {
    double theta = gen.uniform(1, 4), c = gen.uniform(0.1, 5);
    auto h = ConformalMap::hard(theta, c);
    EXPECT_NEAR(map_eval(h, 1 / theta, 0).real(), hard_right_edge(theta, c), 1e-12 * hard_right_edge(theta, c));
    Complex z = map_eval(h, 1 / theta + gen.log_uniform(1e-3, 1e3), 0);
    EXPECT_EQ(z.imag(), 0.0);
    EXPECT_NEAR(map_eval(h, 1 / theta, 1).real(), 0.0, 1e-12);
  }
}

TEST(Map, DerivativesMatchFiniteDifferences) {
  Gen gen(52);
  for (int i = 0; i < kPropertyCases; ++i) {
    double theta = gen.uniform(1, 4), c1 = gen.uniform(0.2, 2), c0 = c1 * gen.uniform(1, 3);
    auto m = i % 2 ? ConformalMap::hard(theta, c1) : ConformalMap::soft(theta, c0, c1);
    Complex s = std::polar(gen.uniform(1.5, 4), gen.uniform(-kPi, kPi));
    const double h = 1e-6;
    Complex d1 = (m.eval(s + h) - m.eval(s - h)) / (2 * h);
    Complex d2 = (m.eval(s + h, 1) - m.eval(s - h, 1)) / (2 * h);
    EXPECT_LT(std::abs(m.eval(s, 1) - d1), 1e-7 * std::max(1.0, std::abs(d1)));
    EXPECT_LT(std::abs(m.eval(s, 2) - d2), 1e-7 * std::max(1.0, std::abs(d2)));
  }
}

TEST(Map, BranchCutAndLargeS) {
  auto m = ConformalMap::hard(2, 1);
  EXPECT_THROW(map_eval(m, {-0.5, 0}, 0), OnBranchCut);
  EXPECT_THROW(map_eval(m, {-0.5, 1e-15}, 0), OnBranchCut);
  EXPECT_NO_THROW(map_eval(m, {-0.5, 1e-6}, 0));
  Complex big(1e8, 3e7);
  EXPECT_LT(std::abs(map_eval(m, big, 0) / big - 1.0), 1e-7);
  // The two sides of the cut carry conjugate values.
  Complex above = map_eval(m, {-0.5, 1e-9}, 0), below = map_eval(m, {-0.5, -1e-9}, 0);
  EXPECT_LT(std::abs(above - std::conj(below)), 1e-12);
  EXPECT_THROW(ConformalMap::soft(2, 1, 1), InvalidArgument);
  EXPECT_THROW(ConformalMap::hard(0.5, 1), InvalidArgument);
}

TEST(CriticalPoints, Examples) {
  auto hard = critical_points(ConformalMap::hard(2, 1));
  EXPECT_DOUBLE_EQ(hard.s_b, 0.5);
  EXPECT_NEAR(hard.image_b, 3 * std::sqrt(3.0) / 2, 1e-14);
  auto soft = critical_points(ConformalMap::soft(2, 1.5, 2.0 / 3));
  EXPECT_NEAR(soft.s_a, -(1 + std::sqrt(19.0)) / 4, 1e-14);
  EXPECT_NEAR(soft.s_b, (-1 + std::sqrt(19.0)) / 4, 1e-14);
}

TEST(CriticalPoints, SoftOrderingAndStationarity) {
  Gen gen(53);
  for (int i = 0; i < kPropertyCases; ++i) {
    double theta = gen.uniform(1, 4), c1 = gen.uniform(0.2, 2), c0 = c1 * gen.uniform(1.001, 5);
    auto m = ConformalMap::soft(theta, c0, c1);
    auto cd = critical_points(m);
    EXPECT_LT(cd.s_a, -1);
    EXPECT_GT(cd.s_b, 0);
    EXPECT_GT(cd.image_a, 0);
    EXPECT_GT(cd.image_b, cd.image_a);
    EXPECT_LT(std::abs(m.eval(cd.s_a, 1)), 1e-10);
    EXPECT_LT(std::abs(m.eval(cd.s_b, 1)), 1e-10);
  }
}

TEST(Curve, ThetaOneIsUnitCircle) {
  auto curve = trace_curve(ConformalMap::hard(1, 1), 512);
  double worst = 0;
  for (double r : curve.radii) worst = std::max(worst, std::abs(r - 1));
  EXPECT_LE(worst, 1e-10);
}

TEST(Curve, HardThetaTwoAtRightAngle) {
  auto curve = trace_curve(ConformalMap::hard(2, 1), 512);
  EXPECT_NEAR(curve.radius_at(kPi / 2), std::tan(kPi / 6), 1e-13);
  for (double r : curve.radii) EXPECT_LT(r, 1.0);
  EXPECT_THROW(trace_curve(ConformalMap::hard(2, 1), 32), InvalidArgument);
}

TEST(Curve, NodesMapToTheSupportMonotonically) {
  Gen gen(54);
  for (int i = 0; i < 20; ++i) {
    double theta = gen.uniform(1, 4), c1 = gen.uniform(0.2, 2);
    auto m = i % 2 ? ConformalMap::hard(theta, c1) : ConformalMap::soft(theta, c1 * gen.uniform(1.01, 4), c1);
    auto curve = trace_curve(m, 256);
    auto cd = critical_points(m);
    double prev = -1;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      Complex y = m.eval(curve.nodes[k]);
      EXPECT_LE(std::abs(y.imag()), 1e-10 * cd.image_b);
      // phi increases from the right end, so J decreases along the samples.
      if (k > 0) EXPECT_LT(y.real(), prev);
      EXPECT_GT(y.real(), cd.image_a);
      EXPECT_LT(y.real(), cd.image_b);
      prev = y.real();
      // r' from the defining equation agrees with a difference quotient.
      const double h = 1e-6;
      double fd = (curve.radius_at(curve.phis[k] + h) - curve.radius_at(curve.phis[k] - h)) / (2 * h);
      if (curve.phis[k] > 1e-3 && curve.phis[k] < kPi - 1e-3) {
        EXPECT_NEAR(curve.dradii[k], fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(Invert, RoundTripOnRandomCurvePoints) {
  Gen gen(55);
  for (int i = 0; i < kPropertyCases; ++i) {
    double theta = gen.uniform(1, 4), c1 = gen.uniform(0.2, 2);
    auto m = i % 2 ? ConformalMap::hard(theta, c1) : ConformalMap::soft(theta, c1 * gen.uniform(1.01, 4), c1);
    auto curve = trace_curve(m, 128);
    double phi = gen.uniform(0.01, kPi - 0.01);
    Complex s = std::polar(curve.radius_at(phi), phi);
    double x = m.eval(s).real();
    auto [up, down] = invert(m, curve, x);
    EXPECT_LT(std::abs(up - s), 1e-10);
    EXPECT_EQ(down, std::conj(up));
    EXPECT_LT(std::abs(m.eval(up) - x), 1e-12 * std::max(1.0, x));
  }
}

TEST(Invert, EdgeBehaviour) {
  const double theta = 2, c = 2;
  auto m = ConformalMap::hard(theta, c);
  auto curve = trace_curve(m, 512);
  double b = hard_right_edge(theta, c);
  auto near_b = invert(m, curve, b * (1 - 1e-12));
  EXPECT_LT(std::abs(near_b.first - 0.5), 1e-5);
  EXPECT_LT(std::abs(near_b.second - 0.5), 1e-5);
  for (double x : {1e-6, 1e-8}) {
    Complex predicted = -1.0 + std::pow(c, -theta / (theta + 1)) * std::polar(1.0, kPi / (theta + 1)) *
                                   std::pow(x, theta / (theta + 1));
    auto [up, down] = invert(m, curve, x);
    EXPECT_LT(std::abs(up - predicted), 5 * x) << "x=" << x;
    EXPECT_GT(up.imag(), 0);
  }
  EXPECT_THROW(invert(m, curve, 0.0), OutOfRange);
  EXPECT_THROW(invert(m, curve, b + 0.1), OutOfRange);
}

TEST(Cardano, Examples) {
  auto m = ConformalMap::hard(2, 2);
  auto [up, down] = cardano_invert(2, 0.5);
  EXPECT_LT(std::abs(m.eval(up) - 0.5), 1e-12);
  EXPECT_GT(up.imag(), 0);
  EXPECT_EQ(down, std::conj(up));
  auto at_b = cardano_invert(2, 3 * std::sqrt(3.0));
  EXPECT_LT(std::abs(at_b.first - 0.5), 1e-6);
  EXPECT_THROW(cardano_invert(2, 6), OutOfRange);
}

TEST(Cardano, AgreesWithNewtonInversion) {
  for (double c : {0.5, 2.0, 7.0}) {
    auto m = ConformalMap::hard(2, c);
    auto curve = trace_curve(m, 512);
    double b = hard_right_edge(2, c);
    for (int k = 0; k < 50; ++k) {
      double x = b * std::pow(10.0, -6.0 + 6.0 * k / 50);
      if (x >= b) continue;
      EXPECT_LT(std::abs(invert(m, curve, x).first - cardano_invert(c, x).first), 1e-10) << "x=" << x;
    }
  }
}

TEST(Contour, ResidueExamples) {
  auto m = ConformalMap::hard(2, 2);
  auto curve = trace_curve(m, 512);
  EXPECT_LT(std::abs(contour_integral(m, curve, [](Complex s) { return 1.0 / (s - 0.1); }) - 1.0), 1e-10);
  EXPECT_LT(std::abs(contour_integral(m, curve, [](Complex s) { return 1.0 / (s - 2.0); })), 1e-10);
  // V(x) = x: (1/2 pi i) oint J(s)/s ds = 1 + theta at c = theta/rho.
  Complex v = contour_integral(m, curve, [&](Complex s) { return m.eval(s) / s; });
  EXPECT_LT(std::abs(v - 3.0), 1e-10);
}

TEST(Contour, PolynomialsIntegrateToZero) {
  Gen gen(56);
  for (int i = 0; i < kPropertyCases; ++i) {
    double theta = gen.uniform(1, 4), c1 = gen.uniform(0.2, 2);
    auto m = i % 2 ? ConformalMap::hard(theta, c1) : ConformalMap::soft(theta, c1 * gen.uniform(1.01, 4), c1);
    auto curve = trace_curve(m, 256);
    std::vector<Complex> coeffs(gen.integer(1, 6));
    for (auto& c : coeffs) c = {gen.uniform(-1, 1), gen.uniform(-1, 1)};
    auto poly = [&](Complex s) {
      Complex acc = 0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
      return acc;
    };
    EXPECT_LT(std::abs(contour_integral(m, curve, poly)), 1e-10);
  }
}

TEST(Curve, InsideTest) {
  auto curve = trace_curve(ConformalMap::hard(2, 1), 256);
  EXPECT_TRUE(curve.inside({0.0, 0.1}));
  EXPECT_TRUE(curve.inside({-0.5, 0.0}));
  EXPECT_FALSE(curve.inside({0.6, 0.0}));
  EXPECT_FALSE(curve.inside({0.0, 0.9}));
}

TEST(Curve, CsvExport) {
  auto m = ConformalMap::hard(2, 1);
  auto curve = trace_curve(m, 64);
  std::ostringstream os;
  write_curve_csv(os, m, curve);
  std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "phi,re_s,im_s,J_of_s");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 64 + 2);
}

}  // namespace
}  // namespace biortho
