#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "biortho/errors.hpp"
#include "biortho/precision.hpp"

namespace biortho {

enum class QuadratureScheme { gauss_legendre_panels, tanh_sinh, gauss_laguerre };

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::tanh_sinh;
  int panel_count = 1;
  int points_per_panel = 16;
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  // Number of step halvings (tanh-sinh, exp-sinh), panel doublings
  // (Gauss-Legendre) or node doublings (Gauss-Laguerre) before giving up.
  int max_levels = 10;
  // Gauss-Laguerre only: the rule integrates x^alpha e^{-rate x} exactly.
  double laguerre_alpha = 0.0;
  double laguerre_rate = 1.0;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw InvalidArgument("quadrature tolerances must be positive");
    if (panel_count < 1) throw InvalidArgument("panel_count must be >= 1");
    if (points_per_panel < 2) throw InvalidArgument("points_per_panel must be >= 2");
    if (max_levels < 1) throw InvalidArgument("max_levels must be >= 1");
    if (!(laguerre_alpha > -1)) throw InvalidArgument("laguerre_alpha must exceed -1");
    if (!(laguerre_rate > 0)) throw InvalidArgument("laguerre_rate must be positive");
  }

  /// Tolerances tied to a precision context (used for moment integrals).
  static QuadratureSpec for_context(const PrecisionContext& ctx) {
    QuadratureSpec s;
    s.abs_tol = ctx.target_tol;
    s.rel_tol = ctx.target_tol;
    s.max_levels = 14;
    return s;
  }
};

namespace detail {

template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
  static double pi() { return boost::math::constants::pi<double>(); }
  static double eps() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct NumTraits<Real> {
  static Real pi() { return boost::math::constants::pi<Real>(); }
  static Real eps() {
    return boost::multiprecision::ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.32));
  }
};

template <class T>
T max_abs(const std::vector<T>& v) {
  using std::abs;
  T m(0);
  for (const auto& x : v) m = std::max<T>(m, abs(x));
  return m;
}

template <class T>
bool is_finite(const T& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

// Componentwise test: vector integrands often mix entries of very different size.
template <class T>
bool converged(const std::vector<T>& cur, const std::vector<T>& prev, const QuadratureSpec& spec) {
  using std::abs;
  const T at(spec.abs_tol), rt(spec.rel_tol);
  for (std::size_t k = 0; k < cur.size(); ++k) {
    if (abs(cur[k] - prev[k]) > std::max<T>(at, rt * abs(cur[k]))) return false;
  }
  return true;
}

// Sum of one side of a double-exponential rule. `node(t, x, w)` returns false
// when the abscissa has collapsed onto an endpoint or overflowed, which ends
// the side.
template <class T, class Node, class F>
void de_side(int sign, const T& h, std::vector<T>& acc, std::vector<T>& vals, Node&& node, F&& f) {
  using std::abs;
  const T t_min(3);
  const T eps = NumTraits<T>::eps();
  int quiet = 0;
  for (long j = (sign > 0 ? 0 : 1);; ++j) {
    T t = T(sign) * T(j) * h;
    T x, w;
    if (!node(t, x, w)) {
      // The remaining width is below one ulp of the endpoint.
      if (j > 0) break;
      throw NonConvergence("degenerate integration interval");
    }
    f(x, vals);
    bool finite = true, negligible = true;
    for (std::size_t k = 0; k < acc.size(); ++k) {
      T term = vals[k] * w;
      if (!is_finite(term)) {
        finite = false;
        break;
      }
      if (abs(term) > eps * abs(acc[k] + term)) negligible = false;
    }
    if (!finite) {
      if (abs(t) >= t_min) break;
      throw NonConvergence("integrand is not finite at x=" + std::to_string(static_cast<double>(x)));
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += vals[k] * w;
    if (abs(t) >= t_min && negligible) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    if (abs(t) > T(12)) break;
  }
}

template <class T, class Node, class F>
std::vector<T> de_rule(std::size_t dim, const QuadratureSpec& spec, Node&& node, F&& f) {
  std::vector<T> prev, vals(dim);
  for (int level = 0; level <= spec.max_levels; ++level) {
    using std::ldexp;
    T h = ldexp(T(1), -level);
    std::vector<T> cur(dim, T(0));
    de_side<T>(+1, h, cur, vals, node, f);
    de_side<T>(-1, h, cur, vals, node, f);
    for (auto& c : cur) c *= h;
    if (level >= 2 && converged(cur, prev, spec)) return cur;
    prev = std::move(cur);
  }
  throw NonConvergence("double-exponential rule did not settle within " + std::to_string(spec.max_levels) +
                       " halvings");
}

}  // namespace detail

/// exp-sinh rule on [0, inf): x = exp(pi/2 sinh t). Handles x^alpha at 0 and
/// super-polynomial decay. `f(x, out)` fills `out` with `dim` components.
template <class T, class F>
std::vector<T> integrate_semiaxis_multi(F&& f, std::size_t dim, const QuadratureSpec& spec) {
  using std::cosh;
  using std::exp;
  using std::sinh;
  const T half_pi = detail::NumTraits<T>::pi() / 2;
  auto node = [&](const T& t, T& x, T& w) {
    T u = half_pi * sinh(t);
    x = exp(u);
    w = x * half_pi * cosh(t);
    return detail::is_finite(w) && x > 0 && w > 0;
  };
  return detail::de_rule<T>(dim, spec, node, f);
}

template <class T, class F>
T integrate_semiaxis(F&& f, const QuadratureSpec& spec) {
  auto wrap = [&](const T& x, std::vector<T>& out) { out[0] = f(x); };
  return integrate_semiaxis_multi<T>(wrap, 1, spec)[0];
}

/// tanh-sinh rule on [a, b]; tolerates integrable endpoint singularities.
/// The integrand is never evaluated at the endpoints themselves.
template <class T, class F>
std::vector<T> tanh_sinh_multi(F&& f, std::size_t dim, const T& a, const T& b, const QuadratureSpec& spec) {
  using std::cosh;
  using std::exp;
  using std::sinh;
  const T half_pi = detail::NumTraits<T>::pi() / 2;
  const T half = (b - a) / 2;
  auto node = [&](const T& t, T& x, T& w) {
    using std::abs;
    T u = half_pi * sinh(abs(t));
    T e = exp(-2 * u);
    T delta = half * 2 * e / (1 + e);  // distance to the nearer endpoint
    x = t >= 0 ? b - delta : a + delta;
    w = half * half_pi * cosh(t) * 4 * e / ((1 + e) * (1 + e));
    return x > a && x < b && w > 0;
  };
  return detail::de_rule<T>(dim, spec, node, f);
}

template <class T, class F>
T tanh_sinh(F&& f, const T& a, const T& b, const QuadratureSpec& spec) {
  auto wrap = [&](const T& x, std::vector<T>& out) { out[0] = f(x); };
  return tanh_sinh_multi<T>(wrap, 1, a, b, spec)[0];
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
template <class T>
void gauss_legendre_rule(int n, std::vector<T>& nodes, std::vector<T>& weights) {
  using std::abs;
  using std::cos;
  nodes.assign(n, T(0));
  weights.assign(n, T(0));
  const T pi = detail::NumTraits<T>::pi();
  const T eps = detail::NumTraits<T>::eps();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    T z = cos(pi * (T(i) + T(0.75)) / (T(n) + T(0.5)));
    T pp(0);
    for (int it = 0; it < 100; ++it) {
      T p1(1), p2(0);
      for (int j = 1; j <= n; ++j) {
        T p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      T dz = p1 / pp;
      z -= dz;
      if (abs(dz) <= 4 * eps) break;
    }
    {
      T p1(1), p2(0);
      for (int j = 1; j <= n; ++j) {
        T p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2 / ((1 - z * z) * pp * pp);
  }
}

/// Composite Gauss-Legendre on `panels` equal panels of [a, b].
template <class T, class F>
std::vector<T> gauss_legendre_panels_multi(F&& f, std::size_t dim, const T& a, const T& b, int panels,
                                           int points) {
  std::vector<T> xs, ws, vals(dim), acc(dim, T(0));
  gauss_legendre_rule<T>(points, xs, ws);
  const T width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    T lo = a + width * p;
    T mid = lo + width / 2;
    for (int i = 0; i < points; ++i) {
      f(mid + width / 2 * xs[i], vals);
      for (std::size_t k = 0; k < dim; ++k) acc[k] += width / 2 * ws[i] * vals[k];
    }
  }
  return acc;
}

/// Finite interval integral using the scheme chosen in `spec`.
template <class T, class F>
std::vector<T> integrate_interval_multi(F&& f, std::size_t dim, const T& a, const T& b, const QuadratureSpec& spec) {
  if (spec.scheme != QuadratureScheme::gauss_legendre_panels) return tanh_sinh_multi<T>(f, dim, a, b, spec);
  int panels = spec.panel_count;
  auto prev = gauss_legendre_panels_multi<T>(f, dim, a, b, panels, spec.points_per_panel);
  for (int level = 0; level < spec.max_levels; ++level) {
    panels *= 2;
    auto cur = gauss_legendre_panels_multi<T>(f, dim, a, b, panels, spec.points_per_panel);
    if (detail::converged(cur, prev, spec)) return cur;
    prev = std::move(cur);
  }
  throw NonConvergence("Gauss-Legendre panels did not converge");
}

template <class T, class F>
T integrate_interval(F&& f, const T& a, const T& b, const QuadratureSpec& spec) {
  auto wrap = [&](const T& x, std::vector<T>& out) { out[0] = f(x); };
  return integrate_interval_multi<T>(wrap, 1, a, b, spec)[0];
}

namespace detail {

// Gauss-Legendre panels graded geometrically toward `sing` (an endpoint).
template <class T, class F>
T graded_gl(F&& f, const T& a, const T& b, bool sing_at_a, int layers, int points) {
  std::vector<T> xs, ws;
  gauss_legendre_rule<T>(points, xs, ws);
  const T ratio(0.15);
  T total(0);
  T len = b - a;
  T near(0);  // distance from the singular end to the inner edge of the current panel
  T far = len;
  using std::abs;
  const T floor = 64 * NumTraits<T>::eps() * std::max<T>(abs(a), abs(b));
  for (int layer = 0; layer <= layers; ++layer) {
    near = layer == layers || far * ratio < floor ? T(0) : far * ratio;
    T lo = sing_at_a ? a + near : b - far;
    T hi = sing_at_a ? a + far : b - near;
    T half = (hi - lo) / 2, mid = (hi + lo) / 2;
    const T& sing = sing_at_a ? a : b;
    for (int i = 0; i < points; ++i) {
      T x = mid + half * xs[i];
      // In the innermost panel a node can round onto the singular endpoint;
      // its share of the integral is below rounding level.
      if (x == sing) continue;
      total += half * ws[i] * f(x);
    }
    if (near == 0) break;
    far = near;
  }
  return total;
}

}  // namespace detail

/// Integral over [lo, hi] of a function with at most a logarithmic (or weak
/// algebraic) singularity at x0. The interval is split at x0 and each side is
/// integrated with a rule that clusters nodes at the split.
template <class T, class F>
T integrate_log_singular(F&& f, const T& lo, const T& hi, const T& x0, const QuadratureSpec& spec) {
  if (!(lo < hi)) throw InvalidArgument("integrate_log_singular requires lo < hi");
  auto side = [&](const T& a, const T& b, bool sing_at_a) -> T {
    if (spec.scheme != QuadratureScheme::gauss_legendre_panels) return tanh_sinh<T>(f, a, b, spec);
    int layers = 8, points = spec.points_per_panel;
    T prev = detail::graded_gl<T>(f, a, b, sing_at_a, layers, points);
    for (int level = 0; level < spec.max_levels; ++level) {
      layers += 8;
      points += 4;
      T cur = detail::graded_gl<T>(f, a, b, sing_at_a, layers, points);
      using std::abs;
      if (abs(cur - prev) <= std::max<T>(T(spec.abs_tol), T(spec.rel_tol) * abs(cur))) return cur;
      prev = cur;
    }
    throw NonConvergence("graded Gauss-Legendre did not converge");
  };
  if (x0 <= lo) return side(lo, hi, true);
  if (x0 >= hi) return side(lo, hi, false);
  return side(lo, x0, false) + side(x0, hi, true);
}

/// Generalized Gauss-Laguerre rule: sum_i w_i g(x_i) ~ int_0^inf g(x) x^alpha e^{-x} dx.
template <class T>
void gauss_laguerre_rule(int n, const T& alpha, std::vector<T>& nodes, std::vector<T>& weights) {
  using std::abs;
  using std::exp;
  using std::lgamma;
  using boost::multiprecision::lgamma;
  nodes.assign(n, T(0));
  weights.assign(n, T(0));
  const double al = static_cast<double>(alpha);
  const T eps = detail::NumTraits<T>::eps();
  const T lg = lgamma(alpha + n) - lgamma(T(n));
  T z(0);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = T((1.0 + al) * (3.0 + 0.92 * al) / (1.0 + 2.4 * n + 1.8 * al));
    } else if (i == 1) {
      z += T((15.0 + 6.25 * al) / (1.0 + 0.9 * al + 2.5 * n));
    } else {
      double ai = i - 1;
      z += T(((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * al / (1.0 + 3.5 * ai)) / (1.0 + 0.3 * al)) *
           (z - nodes[i - 2]);
    }
    T p1, p2, pp;
    for (int it = 0; it < 200; ++it) {
      p1 = T(1);
      p2 = T(0);
      for (int j = 1; j <= n; ++j) {
        T p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1 + alpha - z) * p2 - (j - 1 + alpha) * p3) / j;
      }
      pp = (n * p1 - (n + alpha) * p2) / z;
      T dz = p1 / pp;
      z -= dz;
      if (abs(dz) <= 4 * eps * (1 + abs(z))) break;
    }
    p1 = T(1);
    p2 = T(0);
    for (int j = 1; j <= n; ++j) {
      T p3 = p2;
      p2 = p1;
      p1 = ((2 * j - 1 + alpha - z) * p2 - (j - 1 + alpha) * p3) / j;
    }
    pp = (n * p1 - (n + alpha) * p2) / z;
    nodes[i] = z;
    weights[i] = -exp(lg) / (pp * n * p2);
  }
}

/// Integral of f over [0, inf) using Gauss-Laguerre nodes matched to
/// x^alpha e^{-rate x}. Exact (to rounding) when f/(x^alpha e^{-rate x}) is a
/// polynomial of degree < 2n. Node count doubles until two rules agree.
template <class T, class F>
T integrate_gauss_laguerre(F&& f, const QuadratureSpec& spec) {
  using std::abs;
  using std::exp;
  using std::pow;
  const T alpha(spec.laguerre_alpha), rate(spec.laguerre_rate);
  auto apply = [&](int n) {
    std::vector<T> xs, ws;
    gauss_laguerre_rule<T>(n, alpha, xs, ws);
    T scale = pow(rate, -alpha - 1);
    T sum(0);
    for (int i = 0; i < n; ++i) {
      T x = xs[i] / rate;
      T g = f(x) * exp(xs[i]) / pow(x, alpha);
      sum += ws[i] * g;
    }
    return sum * scale;
  };
  int n = spec.points_per_panel;
  T prev = apply(n);
  for (int level = 0; level < spec.max_levels; ++level) {
    n *= 2;
    T cur = apply(n);
    if (abs(cur - prev) <= std::max<T>(T(spec.abs_tol), T(spec.rel_tol) * abs(cur))) return cur;
    prev = cur;
  }
  throw NonConvergence("Gauss-Laguerre rule did not converge");
}

/// Tensor-product exp-sinh integral over [0, inf)^dim in double precision
/// (dim <= 3). Used for small multiple-integral representations.
template <class F>
double integrate_orthant(F&& f, int dim, const QuadratureSpec& spec) {
  if (dim < 1 || dim > 3) throw InvalidArgument("integrate_orthant supports 1 to 3 dimensions");
  std::vector<double> point(dim);
  std::function<double(int)> nest = [&](int axis) -> double {
    auto inner = [&](double x) {
      point[axis] = x;
      return axis + 1 == dim ? f(point) : nest(axis + 1);
    };
    return integrate_semiaxis<double>(inner, spec);
  };
  return nest(0);
}

}  // namespace biortho
