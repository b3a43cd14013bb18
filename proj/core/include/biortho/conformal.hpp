#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "biortho/roots.hpp"

namespace biortho {

enum class MapKind { hard, soft };

/// J(s) = (c1 s + c0) ((s+1)/s)^{1/theta} with the principal branch, analytic
/// off [-1, 0]. The hard-edge map is the case c0 = c1 = c.
class ConformalMap {
 public:
  static ConformalMap hard(double theta, double c);
  /// Requires c0 > c1 > 0.
  static ConformalMap soft(double theta, double c0, double c1);

  MapKind kind() const { return kind_; }
  double theta() const { return theta_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }
  /// c0/c1; the shape of the level curve depends only on theta and this ratio.
  double ratio() const { return c0_ / c1_; }

  /// J (order 0), J' (order 1) or J'' (order 2). Throws OnBranchCut within
  /// 1e-14 of [-1, 0].
  Complex eval(Complex s, int order = 0) const;

 private:
  MapKind kind_ = MapKind::hard;
  double theta_ = 2.0;
  double c0_ = 1.0, c1_ = 1.0;
};

Complex map_eval(const ConformalMap& m, Complex s, int derivative_order);

/// Real critical points of J and their images. For the hard map s_a = -1
/// (the branch point) with image 0.
struct CriticalData {
  double s_a = -1.0;
  double s_b = 0.0;
  double image_a = 0.0;
  double image_b = 0.0;
};
CriticalData critical_points(const ConformalMap& m);

/// The upper arc of the closed curve on which J is real, sampled in the polar
/// angle phi in (0, pi) on Gauss-Legendre panels graded toward both ends.
/// The lower arc is the mirror image.
struct CurveSamples {
  double theta = 2.0;
  double ratio = 1.0;
  double s_left = -1.0;
  double s_right = 0.5;
  std::vector<double> phis;
  std::vector<double> weights;  // quadrature weights in phi
  std::vector<double> radii;
  std::vector<double> dradii;   // r'(phi)
  std::vector<Complex> nodes;   // r e^{i phi}
  std::vector<Complex> tangents;  // ds/dphi

  std::size_t size() const { return phis.size(); }
  /// Radius of the curve at polar angle |phi| (solved afresh, not interpolated).
  double radius_at(double phi) const;
  /// Derivative of the radius, from the defining equation.
  double dradius_at(double phi, double r) const;
  /// Strictly inside the closed curve.
  bool inside(Complex s) const;
};

/// Samples the curve with M nodes (M >= 64, rounded to a multiple of 16).
CurveSamples trace_curve(const ConformalMap& m, int M = 512);

/// Preimages of x under J on the curve: first in the upper half plane,
/// second its conjugate. x must lie strictly inside the image interval.
std::pair<Complex, Complex> invert(const ConformalMap& m, const CurveSamples& curve, double x);

/// Closed-form preimages for the hard map with theta = 2, upper one first.
std::pair<Complex, Complex> cardano_invert(double c, double x);

/// (1/2 pi i) times the integral of g over the closed curve, counterclockwise,
/// using the conjugate symmetry of the curve.
Complex contour_integral(const ConformalMap& m, const CurveSamples& curve, const std::function<Complex(Complex)>& g);

/// CSV rows "phi,re_s,im_s,J_of_s" for the upper arc, endpoints included.
void write_curve_csv(std::ostream& os, const ConformalMap& m, const CurveSamples& curve);

}  // namespace biortho
