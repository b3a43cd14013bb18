#include "biortho/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "biortho/errors.hpp"
#include "biortho/quadrature.hpp"

namespace biortho {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCurveNodes = 512;

QuadratureSpec density_spec() {
  QuadratureSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-10;
  q.max_levels = 11;
  return q;
}

double phi_integral(const std::function<double(double)>& f, double phi_split) {
  const QuadratureSpec q = density_spec();
  if (phi_split <= 0.0 || phi_split >= kPi) return tanh_sinh<double>(f, 0.0, kPi, q);
  return tanh_sinh<double>(f, 0.0, phi_split, q) + tanh_sinh<double>(f, phi_split, kPi, q);
}

// Shared density integral: psi(x) = 1/(2 pi^2 x) int h(y) log|1 + w| (-dy).
double density_on_curve(const ConformalMap& m, const Potential& v, const CurveSamples& curve, double x) {
  const Complex ip = invert(m, curve, x).first;
  const Complex diff(0.0, 2.0 * ip.imag());
  auto integrand = [&](double phi) {
    const ArcPoint p = arc_point(m, curve, phi);
    if (p.dy == 0.0) return 0.0;
    const Complex w = diff / (p.s - ip);
    const double arg = 2.0 * w.real() + std::norm(w);
    // |s - conj(z)| > |s - z| for s, z in the upper half plane.
    if (arg < -1e-12 * std::max(1.0, std::norm(w))) throw InvalidSolution("log argument of the density kernel fell below 1");
    return v.radial_derivative(p.y) * 0.5 * std::log1p(std::max(arg, 0.0)) * (-p.dy);
  };
  return phi_integral(integrand, std::arg(ip)) / (2.0 * kPi * kPi * x);
}

std::vector<double> classification_grid(double a, double b) {
  std::vector<double> g;
  for (double t : log_grid(1e-6, 1e-2, 16)) g.push_back(a + (b - a) * t);
  for (int i = 1; i <= 40; ++i) g.push_back(a + (b - a) * (0.01 + 0.989 * i / 40.0));
  for (double t : log_grid(1e-6, 1e-2, 8)) g.push_back(b - (b - a) * t);
  return g;
}

bool density_nonnegative(const EquilibriumMeasure& m) {
  for (double x : classification_grid(m.left, m.right)) {
    if (!(m.density(x) >= -1e-10)) return false;
  }
  return true;
}

std::shared_ptr<const DensityCache> build_cache(const EquilibriumMeasure& em) {
  auto mu = [&](double phi) {
    const ArcPoint p = arc_point(em.map, em.curve, phi);
    if (p.dy == 0.0) return 0.0;
    return em.density(p.y) * (-p.dy);
  };
  auto cache = std::make_shared<DensityCache>();
  for (int n : {33, 65, 129}) {
    cache->mu = Chebyshev(mu, 0.0, kPi, n);
    double peak = 0;
    for (double c : cache->mu.coefficients()) peak = std::max(peak, std::abs(c));
    if (cache->mu.tail() <= 1e-10 * peak) break;
  }
  cache->mu_integral = cache->mu.integral();
  cache->mass = cache->mu_integral(kPi);
  if (!(cache->mass > 0)) throw InvalidSolution("density has non-positive mass");
  const int n = 4096;
  cache->xs.reserve(n + 1);
  cache->cdf.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double phi = kPi * (n - i) / n;
    double x = i == 0 ? em.left : i == n ? em.right : arc_point(em.map, em.curve, phi).y;
    double f = i == 0 ? 0.0 : i == n ? 1.0 : (cache->mass - cache->mu_integral(phi)) / cache->mass;
    x = std::clamp(x, em.left, em.right);
    if (!cache->xs.empty()) {
      x = std::max(x, cache->xs.back());
      f = std::max(f, cache->cdf.back());
    }
    cache->xs.push_back(x);
    cache->cdf.push_back(std::min(f, 1.0));
  }
  return cache;
}

double interpolate(const std::vector<double>& from, const std::vector<double>& to, double v) {
  auto it = std::upper_bound(from.begin(), from.end(), v);
  if (it == from.begin()) return to.front();
  if (it == from.end()) return to.back();
  const std::size_t hi = static_cast<std::size_t>(it - from.begin()), lo = hi - 1;
  const double span = from[hi] - from[lo];
  if (span <= 0) return to[lo];
  return to[lo] + (to[hi] - to[lo]) * (v - from[lo]) / span;
}

}  // namespace

std::string to_string(EdgeRegime r) {
  switch (r) {
    case EdgeRegime::HardEdge:
      return "HardEdge";
    case EdgeRegime::SoftEdge:
      return "SoftEdge";
    case EdgeRegime::CriticalEdge:
      return "CriticalEdge";
  }
  return "unknown";
}

ArcPoint arc_point(const ConformalMap& m, const CurveSamples& curve, double phi) {
  ArcPoint p;
  if (m.kind() == MapKind::hard && kPi - phi < 1e-13) {
    p.s = Complex(curve.s_left, 0.0);
    return p;
  }
  const double r = curve.radius_at(phi);
  const double dr = curve.dradius_at(phi, r);
  const Complex e = std::polar(1.0, phi);
  p.s = r * e;
  p.ds = Complex(dr, r) * e;
  p.y = m.eval(p.s).real();
  p.dy = (m.eval(p.s, 1) * p.ds).real();
  return p;
}

double EquilibriumMeasure::density(double x) const {
  if (!(x > left && x < right)) return 0.0;
  return density_on_curve(map, potential, curve, x);
}

double EquilibriumMeasure::angle_of(double x) const { return std::arg(invert(map, curve, x).first); }

const DensityCache& EquilibriumMeasure::cache() const {
  if (!density_cache) throw InvalidConfiguration("density cache was not built for this measure");
  return *density_cache;
}

double EquilibriumMeasure::cdf(double x) const {
  if (x <= left) return 0.0;
  if (x >= right) return 1.0;
  return interpolate(cache().xs, cache().cdf, x);
}

double EquilibriumMeasure::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  return interpolate(cache().cdf, cache().xs, u);
}

double solve_c(const Potential& v, double theta) {
  const ConformalMap unit = ConformalMap::hard(theta, 1.0);
  const CurveSamples curve = trace_curve(unit, kCurveNodes);
  std::vector<Complex> j1(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) j1[i] = unit.eval(curve.nodes[i]);
  auto f = [&](double c) {
    if (c <= 0) return -(1.0 + theta);
    double sum = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const Complex jc = c * j1[i];
      sum += curve.weights[i] * (v.eval(jc, 1) * jc / curve.nodes[i] * curve.tangents[i]).imag();
    }
    return sum / kPi - (1.0 + theta);
  };
  const double c = find_root_monotone(f, 0.0, 1.0, 1e-12);
  if (!(c > 0)) throw InvalidSolution("hard-edge scale c must be positive");
  return c;
}

Vec2 soft_edge_residual(const Potential& v, double theta, double c0, double c1) {
  // Both integrands are analytic off [-1, 0], so a circle around the cut
  // replaces the level curve and the trapezoid rule converges geometrically.
  const ConformalMap m = ConformalMap::soft(theta, c0, c1);
  const int n = 256;
  double at_zero = 0, at_minus_one = 0;
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, 2.0 * kPi * k / n);
    const Complex s = -0.5 + e;
    const Complex j = m.eval(s);
    const Complex u = v.eval(j, 1) * j * e;  // ds / (i dt) = e
    at_zero += (u / s).real();
    at_minus_one += (u / (s + 1.0)).real();
  }
  return {at_zero / n - (1.0 + theta), at_minus_one / n - 1.0};
}

Vec2 solve_c0_c1(const Potential& v, double theta, Vec2 guess) {
  if (!(guess[0] > guess[1] && guess[1] > 0)) throw InvalidArgument("soft-edge guess needs c0 > c1 > 0");
  // The hard-edge solution c0 = c1 also solves this system, so Newton started
  // near it falls back onto it. Instead, for a fixed ratio k = c0/c1 > 1 the
  // first equation fixes c1, and the second is solved in k on a log-spaced
  // scan that stays away from k = 1.
  auto scale_for = [&](double k) {
    return find_root_monotone(
        [&](double c1) { return c1 <= 0 ? -(1.0 + theta) : soft_edge_residual(v, theta, k * c1, c1)[0]; }, 0.0, 1.0,
        1e-13);
  };
  auto second = [&](double k) {
    const double c1 = scale_for(k);
    return soft_edge_residual(v, theta, k * c1, c1)[1];
  };
  const int n = 60;
  std::vector<double> ks, gs;
  for (double t : log_grid(1e-6, 1e3, n)) {
    ks.push_back(1.0 + t);
    gs.push_back(second(ks.back()));
  }
  const double target = guess[0] / guess[1];
  double best = NAN;
  for (int i = 0; i + 1 < n; ++i) {
    if ((gs[i] < 0) == (gs[i + 1] < 0)) continue;
    const double k = find_root_monotone(second, ks[i], ks[i + 1], 1e-14);
    if (std::isnan(best) || std::abs(std::log(k / target)) < std::abs(std::log(best / target))) best = k;
  }
  if (std::isnan(best)) throw NoConvergence("no soft-edge solution with c0 > c1 > 0");
  const double c1 = scale_for(best);
  const Vec2 c{best * c1, c1};
  const Vec2 r = soft_edge_residual(v, theta, c[0], c[1]);
  if (std::max(std::abs(r[0]), std::abs(r[1])) > 1e-9) throw NoConvergence("soft-edge residual did not vanish");
  if (!(c[0] > c[1] && c[1] > 0)) throw InvalidSolution("soft-edge solution violates c0 > c1 > 0");
  return c;
}

double density_hard(const Potential& v, double theta, double c, const CurveSamples& curve, double x) {
  return density_on_curve(ConformalMap::hard(theta, c), v, curve, x);
}

double density_soft(const Potential& v, double theta, double c0, double c1, const CurveSamples& curve, double x) {
  return density_on_curve(ConformalMap::soft(theta, c0, c1), v, curve, x);
}

double laguerre_density_closed_form(double rho, double x) {
  if (!(rho > 0)) throw InvalidArgument("Laguerre density needs rho > 0");
  const double b = 3.0 * std::sqrt(3.0) / rho;
  if (!(x > 0 && x < b)) return 0.0;
  const double root = std::sqrt(std::max(0.0, 1.0 - rho * rho * x * x / 27.0));
  const double eps = rho * rho * x * x / 27.0;
  return std::sqrt(3.0) * std::pow(rho, 2.0 / 3.0) / (2.0 * kPi * std::cbrt(x)) *
         (std::cbrt(1.0 + root) - std::cbrt(eps / (1.0 + root)));
}

double quadratic_density_hard(double tau, double rho, double theta, double c, const CurveSamples& curve, double x) {
  const ConformalMap m = ConformalMap::hard(theta, c);
  const Complex s = theta == 2.0 ? cardano_invert(c, x).first : invert(m, curve, x).first;
  const double k = (theta + 1.0) / theta;
  const double a2 = 2.0 * tau * c * c;
  const Complex n_in = a2 * s * s + 2.0 * a2 * k * s + rho * c * s + rho * c * k +
                       a2 * (theta + 1.0) * (theta + 2.0) / (theta * theta) - 1.0;
  return n_in.imag() / (kPi * x);
}

double quadratic_density_soft(double tau, double rho, double theta, double c0, double c1, const CurveSamples& curve,
                              double x) {
  if (tau != 1.0 || theta != 2.0) throw InvalidArgument("soft quadratic closed form needs tau = 1 and theta = 2");
  const ConformalMap m = ConformalMap::soft(theta, c0, c1);
  const Complex s = invert(m, curve, x).first;
  const Complex n_in = 2.0 / (rho * rho) * (4.0 * s + rho * rho) * (s + 1.0);
  return n_in.imag() / (kPi * x);
}

EdgeConstants edge_constants(const Potential& v, double theta, double c, const CurveSamples&) {
  const ConformalMap m = ConformalMap::hard(theta, c);
  const CriticalData crit = critical_points(m);
  // Along the arc h(y) dy = h(J) J'(s) ds is real, so the arc integral of
  // h Im(1/(s - p)) (-dy) is pi times (1/2 pi i) of the closed integral of
  // -h(J) J' / (s - p). That integrand is analytic off [-1, 0] (J'(s_b) = 0
  // cancels the pole at s_b), so the contour moves to a circle around the
  // cut where the trapezoid rule converges geometrically.
  auto weighted = [&](double pole) {
    const int n = 256;
    const Complex centre(-0.5, 0.0);
    const double radius = crit.s_b + 1.0;
    Complex sum = 0;
    for (int k = 0; k < n; ++k) {
      const Complex e = std::polar(1.0, 2.0 * kPi * k / n);
      const Complex s = centre + radius * e;
      const Complex j = m.eval(s), dj = m.eval(s, 1);
      const Complex h = v.eval(j, 2) * j + v.eval(j, 1);
      sum += -h * dj / (s - pole) * radius * e;  // ds / (i dt)
    }
    return kPi * (sum / static_cast<double>(n)).real();
  };
  EdgeConstants e;
  e.d1 = -std::pow(c, -theta / (theta + 1.0)) * std::sin(kPi / (theta + 1.0)) * weighted(-1.0) / (kPi * kPi);
  const double j2 = m.eval(crit.s_b, 2).real();
  e.d2 = -std::sqrt(2.0 / j2) * weighted(crit.s_b) / (kPi * kPi * crit.image_b);
  return e;
}

EquilibriumMeasure make_hard_measure(const Potential& v, double theta, double c) {
  EquilibriumMeasure em;
  em.theta = theta;
  em.potential = v;
  em.regime = EdgeRegime::HardEdge;
  em.map = ConformalMap::hard(theta, c);
  em.curve = trace_curve(em.map, kCurveNodes);
  const CriticalData crit = critical_points(em.map);
  em.left = 0.0;
  em.right = crit.image_b;
  em.density_cache = build_cache(em);
  return em;
}

EquilibriumMeasure make_soft_measure(const Potential& v, double theta, double c0, double c1) {
  EquilibriumMeasure em;
  em.theta = theta;
  em.potential = v;
  em.regime = EdgeRegime::SoftEdge;
  em.map = ConformalMap::soft(theta, c0, c1);
  em.curve = trace_curve(em.map, kCurveNodes);
  const CriticalData crit = critical_points(em.map);
  em.left = crit.image_a;
  em.right = crit.image_b;
  if (!(em.left > 0)) throw InvalidSolution("soft-edge support must start at a positive point");
  em.density_cache = build_cache(em);
  return em;
}

EquilibriumMeasure classify_edge(const Potential& v, double theta) {
  const double c = solve_c(v, theta);
  const ConformalMap m = ConformalMap::hard(theta, c);
  const CurveSamples curve = trace_curve(m, kCurveNodes);
  const EdgeConstants ec = edge_constants(v, theta, c, curve);
  const double tol = 1e-6 * std::max(1.0, std::abs(ec.d2));
  if (ec.d1 >= -tol) {
    EquilibriumMeasure em;
    em.theta = theta;
    em.potential = v;
    em.map = m;
    em.curve = curve;
    em.left = 0.0;
    em.right = critical_points(m).image_b;
    em.edge_constants = ec;
    em.regime = std::abs(ec.d1) <= tol ? EdgeRegime::CriticalEdge : EdgeRegime::HardEdge;
    if (density_nonnegative(em)) {
      em.density_cache = build_cache(em);
      return em;
    }
  }
  try {
    const Vec2 cc = solve_c0_c1(v, theta, {c, c * theta / (1.0 + theta)});
    EquilibriumMeasure em = make_soft_measure(v, theta, cc[0], cc[1]);
    if (density_nonnegative(em)) return em;
  } catch (const Error&) {
    // fall through
  }
  throw Unclassifiable("neither the hard-edge nor the soft-edge candidate validates for " + v.str());
}

double hard_edge_d1(double tau, double rho, double theta) {
  const Potential v = Potential::quadratic(tau, rho);
  const double c = solve_c(v, theta);
  const CurveSamples curve = trace_curve(ConformalMap::hard(theta, c), kCurveNodes);
  return edge_constants(v, theta, c, curve).d1;
}

double locate_critical_rho(double tau, double theta, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0)) throw InvalidArgument("critical search needs lo < hi and tol > 0");
  double flo = hard_edge_d1(tau, lo, theta), fhi = hard_edge_d1(tau, hi, theta);
  if ((flo < 0) == (fhi < 0)) throw BracketFailure("d1 does not change sign on the rho interval");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = hard_edge_d1(tau, mid, theta);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double effective_potential(const EquilibriumMeasure& m, double x) {
  if (!(x > 0)) throw InvalidArgument("effective potential needs x > 0");
  const DensityCache& cache = m.cache();
  const double xt = std::pow(x, m.theta);
  auto integrand = [&](double phi) {
    const double mu = cache.mu(phi);
    if (mu == 0.0) return 0.0;
    const ArcPoint p = arc_point(m.map, m.curve, phi);
    return (std::log(std::abs(x - p.y)) + std::log(std::abs(xt - std::pow(p.y, m.theta)))) * mu;
  };
  const double split = x > m.left && x < m.right ? m.angle_of(x) : 0.0;
  return phi_integral(integrand, split) / cache.mass - m.potential.eval(x);
}

EulerLagrangeReport verify_euler_lagrange(const EquilibriumMeasure& m, const std::vector<double>& grid_in,
                                          const std::vector<double>& grid_out) {
  if (grid_in.empty()) throw InvalidArgument("Euler-Lagrange check needs points inside the support");
  EulerLagrangeReport r;
  for (double x : grid_in) r.values_in.push_back(effective_potential(m, x));
  std::vector<double> sorted = r.values_in;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  r.ell_estimate = sorted[sorted.size() / 2];
  for (double val : r.values_in) r.max_dev_on_support = std::max(r.max_dev_on_support, std::abs(val - r.ell_estimate));
  r.min_slack_off_support = grid_out.empty() ? 0.0 : INFINITY;
  for (double x : grid_out) {
    r.values_out.push_back(effective_potential(m, x));
    r.min_slack_off_support = std::min(r.min_slack_off_support, r.ell_estimate - r.values_out.back());
  }
  return r;
}

std::vector<double> density_on_grid(const EquilibriumMeasure& m, const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < xs.size(); i += workers) out[i] = m.density(xs[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double total_mass(const EquilibriumMeasure& m) {
  QuadratureSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-11;
  q.max_levels = 10;
  const double a = m.left, b = m.right, mid = 0.5 * (a + b);
  // The last 1e-8 of the support at each edge is taken from the local power
  // law psi ~ d^beta, estimated from two points.
  const double gap = 1e-8 * (b - a);
  auto end_piece = [&](double edge, double dir) {
    const double p1 = m.density(edge + dir * gap), p2 = m.density(edge + dir * 2 * gap);
    const double beta = std::log(p2 / p1) / std::log(2.0);
    return gap * p1 / (1.0 + beta);
  };
  double lower;
  if (m.map.kind() == MapKind::hard) {
    const double p = m.theta + 1.0;
    lower = tanh_sinh<double>([&](double t) { return m.density(std::pow(t, p)) * p * std::pow(t, p - 1.0); },
                              std::pow(a + gap, 1.0 / p), std::pow(mid, 1.0 / p), q);
  } else {
    lower = tanh_sinh<double>([&](double t) { return m.density(a + t * t) * 2.0 * t; }, std::sqrt(gap),
                              std::sqrt(mid - a), q);
  }
  const double upper = tanh_sinh<double>([&](double t) { return m.density(b - t * t) * 2.0 * t; }, std::sqrt(gap),
                                         std::sqrt(b - mid), q);
  return end_piece(a, 1.0) + lower + upper + end_piece(b, -1.0);
}

ResolventData::ResolventData(const EquilibriumMeasure& m) : map_(m.map), curve_(m.curve), potential_(m.potential) {}

Complex ResolventData::u(Complex s) const {
  const Complex j = map_.eval(s);
  return potential_.eval(j, 1) * j;
}

Complex ResolventData::du(Complex s) const {
  const Complex j = map_.eval(s);
  return (potential_.eval(j, 2) * j + potential_.eval(j, 1)) * map_.eval(s, 1);
}

Complex ResolventData::cauchy(Complex s, bool inside) const {
  // Subtracting U(s) keeps the sum accurate when s approaches the curve. Far
  // from the curve it only adds cancellation (U blows up at the cut).
  double nearest = std::numeric_limits<double>::infinity();
  for (const Complex& xi : curve_.nodes) nearest = std::min({nearest, std::abs(xi - s), std::abs(std::conj(xi) - s)});
  Complex us;
  bool subtract = nearest < 0.05;
  if (subtract) {
    try {
      us = u(s);
    } catch (const OnBranchCut&) {
      subtract = false;
    }
  }
  Complex sum = 0;
  for (std::size_t i = 0; i < curve_.size(); ++i) {
    const Complex xi = curve_.nodes[i], dxi = curve_.tangents[i];
    const Complex up = u(xi), lo = std::conj(up);
    const Complex shift = subtract ? us : Complex(0.0);
    auto term = [&](Complex node, Complex value, Complex tangent) {
      if (subtract && std::abs(node - s) < 1e-12) return du(s) * tangent;
      return (value - shift) * tangent / (node - s);
    };
    sum += curve_.weights[i] * (term(xi, up, dxi) - term(std::conj(xi), lo, std::conj(dxi)));
  }
  sum /= Complex(0.0, 2.0 * kPi);
  if (subtract && inside) sum += us;
  return sum;
}

Complex ResolventData::n0_inside(Complex s) const { return cauchy(s, true) - 1.0; }

Complex ResolventData::n0_outside(Complex s) const { return 1.0 - cauchy(s, false); }

double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("exponent fit needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw InvalidArgument("exponent fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace biortho
