#include "biortho/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "biortho/errors.hpp"
#include "biortho/quadrature.hpp"

namespace biortho {

namespace {

constexpr double kPi = std::numbers::pi;

double dist_to_cut(Complex s) {
  if (s.real() >= -1.0 && s.real() <= 0.0) return std::abs(s.imag());
  return std::min(std::abs(s + 1.0), std::abs(s));
}

// arg(k + r e^{i phi}) + (1/theta) arg(1 + r e^{i phi}) - phi/theta.
double level_equation(double r, double phi, double k, double theta) {
  Complex z = std::polar(r, phi);
  return std::arg(k + z) + std::arg(1.0 + z) / theta - phi / theta;
}

double solve_radius(double phi, double k, double theta, double hint) {
  return find_root_monotone([&](double r) { return level_equation(r, phi, k, theta); }, 0.0, hint, 1e-300);
}

// Panel breakpoints on [0, pi], graded geometrically toward both ends.
std::vector<double> breakpoints(int panels) {
  const int per_side = std::max(1, panels / 2);
  const double q = std::max(0.2, std::pow(10.0, -7.0 / std::max(1, per_side - 1)));
  std::vector<double> out{0.0, kPi / 2, kPi};
  double d = kPi / 2;
  for (int k = 1; k < per_side; ++k) {
    d *= q;
    out.push_back(d);
    out.push_back(kPi - d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ConformalMap ConformalMap::hard(double theta, double c) {
  if (!(theta >= 1.0)) throw InvalidArgument("conformal map needs theta >= 1");
  if (!(c > 0)) throw InvalidArgument("hard-edge map needs c > 0");
  ConformalMap m;
  m.kind_ = MapKind::hard;
  m.theta_ = theta;
  m.c0_ = m.c1_ = c;
  return m;
}

ConformalMap ConformalMap::soft(double theta, double c0, double c1) {
  if (!(theta >= 1.0)) throw InvalidArgument("conformal map needs theta >= 1");
  if (!(c1 > 0) || !(c0 > c1)) throw InvalidArgument("soft-edge map needs c0 > c1 > 0");
  ConformalMap m;
  m.kind_ = MapKind::soft;
  m.theta_ = theta;
  m.c0_ = c0;
  m.c1_ = c1;
  return m;
}

Complex ConformalMap::eval(Complex s, int order) const {
  if (order < 0 || order > 2) throw InvalidArgument("map derivative order must be 0, 1 or 2");
  if (!(dist_to_cut(s) >= 1e-14)) throw OnBranchCut("point lies on the branch cut [-1, 0]");
  const Complex lin = c1_ * s + c0_;
  const Complex j = lin * std::exp(std::log((s + 1.0) / s) / theta_);
  if (order == 0) return j;
  const Complex l = c1_ / lin + (1.0 / (s + 1.0) - 1.0 / s) / theta_;
  if (order == 1) return j * l;
  const Complex dl = -c1_ * c1_ / (lin * lin) + (1.0 / (s * s) - 1.0 / ((s + 1.0) * (s + 1.0))) / theta_;
  return j * (l * l + dl);
}

Complex map_eval(const ConformalMap& m, Complex s, int derivative_order) { return m.eval(s, derivative_order); }

CriticalData critical_points(const ConformalMap& m) {
  CriticalData d;
  const double th = m.theta();
  if (m.kind() == MapKind::hard) {
    d.s_a = -1.0;
    d.s_b = 1.0 / th;
    d.image_a = 0.0;
    d.image_b = m.c0() * std::pow(1.0 + th, 1.0 + 1.0 / th) / th;
    return d;
  }
  const double c0 = m.c0(), c1 = m.c1();
  const double centre = -(th - 1.0) / (2.0 * th);
  const double half = std::sqrt(4.0 * c0 * c1 * th + c1 * c1 * (th - 1.0) * (th - 1.0)) / (2.0 * th * c1);
  d.s_a = centre - half;
  d.s_b = centre + half;
  d.image_a = m.eval(d.s_a).real();
  d.image_b = m.eval(d.s_b).real();
  return d;
}

double CurveSamples::radius_at(double phi) const {
  phi = std::abs(phi);
  if (phi <= 0.0) return s_right;
  if (phi >= kPi) return -s_left;
  return solve_radius(phi, ratio, theta, std::max({1.0, s_right, -s_left}));
}

double CurveSamples::dradius_at(double phi, double r) const {
  const Complex e = std::polar(1.0, phi);
  const Complex z = r * e;
  const double f_r = (e / (ratio + z)).imag() + (e / (1.0 + z)).imag() / theta;
  const double f_phi = (z / (ratio + z)).real() + (z / (1.0 + z)).real() / theta - 1.0 / theta;
  return -f_phi / f_r;
}

bool CurveSamples::inside(Complex s) const { return std::abs(s) < radius_at(std::abs(std::arg(s))); }

CurveSamples trace_curve(const ConformalMap& m, int M) {
  if (M < 64) throw InvalidArgument("trace_curve needs M >= 64");
  const int points = 16;
  const int panels = std::max(4, M / points);
  CriticalData crit = critical_points(m);
  CurveSamples c;
  c.theta = m.theta();
  c.ratio = m.ratio();
  c.s_left = crit.s_a;
  c.s_right = crit.s_b;
  std::vector<double> gx, gw;
  gauss_legendre_rule<double>(points, gx, gw);
  const auto bp = breakpoints(panels);
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    const double half = (bp[p + 1] - bp[p]) / 2, mid = (bp[p + 1] + bp[p]) / 2;
    for (int i = 0; i < points; ++i) {
      const double phi = mid + half * gx[i];
      const double r = c.radius_at(phi);
      const double dr = c.dradius_at(phi, r);
      const Complex e = std::polar(1.0, phi);
      c.phis.push_back(phi);
      c.weights.push_back(half * gw[i]);
      c.radii.push_back(r);
      c.dradii.push_back(dr);
      c.nodes.push_back(r * e);
      c.tangents.push_back(Complex(dr, r) * e);
    }
  }
  return c;
}

std::pair<Complex, Complex> invert(const ConformalMap& m, const CurveSamples& curve, double x) {
  const CriticalData crit = critical_points(m);
  if (!(x > crit.image_a && x < crit.image_b)) {
    throw OutOfRange("x = " + std::to_string(x) + " is outside the image interval (" + std::to_string(crit.image_a) +
                     ", " + std::to_string(crit.image_b) + ")");
  }
  auto image_at = [&](double phi) {
    if (phi <= 0.0) return crit.image_b;
    if (phi >= kPi) return crit.image_a;
    return m.eval(std::polar(curve.radius_at(phi), phi)).real();
  };
  // J decreases along the arc; bracket x between neighbouring samples.
  double lo = 0.0, hi = kPi;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double v = m.eval(curve.nodes[i]).real();
    if (v > x) lo = curve.phis[i];
    else {
      hi = curve.phis[i];
      break;
    }
  }
  const double phi = find_root_monotone([&](double p) { return x - image_at(p); }, lo, hi, 1e-300);
  Complex s = std::polar(curve.radius_at(phi), phi);
  const double scale = std::max(1.0, x);
  if (std::abs(m.eval(s) - x) > 1e-13 * scale) {
    try {
      Complex t = newton_complex([&](Complex z) { return m.eval(z) - x; }, [&](Complex z) { return m.eval(z, 1); }, s,
                                 1e-13 * scale, 50);
      if (t.imag() > 0) s = t;
    } catch (const Error&) {
      // keep the bracketed solution
    }
  }
  if (std::abs(m.eval(s) - x) > 1e-10 * scale) throw NoConvergence("inversion residual too large");
  return {s, std::conj(s)};
}

std::pair<Complex, Complex> cardano_invert(double c, double x) {
  const double b = 1.5 * std::sqrt(3.0) * c;
  if (!(c > 0) || !(x > 0) || !(x <= b)) throw OutOfRange("cardano_invert needs 0 < x <= 3 sqrt(3) c / 2");
  const double eps = 4.0 * x * x / (27.0 * c * c);
  const double root = std::sqrt(std::max(0.0, 1.0 - eps));
  const double chi_plus = std::cbrt(1.0 + root);
  const double chi_minus = std::cbrt(eps / (1.0 + root));  // (1 - root)^{1/3} without cancellation
  const double k = std::cbrt(x * x / (2.0 * c * c));
  const Complex u(0.5, std::sqrt(3.0) / 2);
  const Complex upper = k * (u * chi_plus + std::conj(u) * chi_minus) - 1.0;
  return {upper, std::conj(upper)};
}

Complex contour_integral(const ConformalMap&, const CurveSamples& curve, const std::function<Complex(Complex)>& g) {
  Complex sum = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Complex s = curve.nodes[i], ds = curve.tangents[i];
    sum += curve.weights[i] * (g(s) * ds - g(std::conj(s)) * std::conj(ds));
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) throw NonConvergence("contour integrand is not finite");
  return sum / Complex(0.0, 2.0 * kPi);
}

void write_curve_csv(std::ostream& os, const ConformalMap& m, const CurveSamples& curve) {
  const CriticalData crit = critical_points(m);
  os.precision(17);
  os << "phi,re_s,im_s,J_of_s\n";
  os << 0.0 << ',' << curve.s_right << ',' << 0.0 << ',' << crit.image_b << '\n';
  for (std::size_t i = 0; i < curve.size(); ++i) {
    os << curve.phis[i] << ',' << curve.nodes[i].real() << ',' << curve.nodes[i].imag() << ','
       << m.eval(curve.nodes[i]).real() << '\n';
  }
  os << kPi << ',' << curve.s_left << ',' << 0.0 << ',' << crit.image_a << '\n';
}

}  // namespace biortho
