#include "biortho/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "biortho/errors.hpp"

namespace biortho {

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0)) throw InvalidArgument("root tolerance must be positive");
  if (!(lo < hi)) throw InvalidArgument("root bracket requires lo < hi");
  double flo = f(lo), fhi = f(hi);
  if (std::abs(flo) <= tol) return lo;
  for (int expansions = 0; (flo < 0) == (fhi < 0); ++expansions) {
    if (std::abs(fhi) <= tol) return hi;
    if (expansions == 60) {
      throw BracketFailure("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    hi = hi > 0 ? 2 * hi : lo + 2 * (hi - lo);
    fhi = f(hi);
    if (!std::isfinite(fhi)) throw BracketFailure("function is not finite at " + std::to_string(hi));
  }

  // Brent's method; b is the current best estimate and [b, c] brackets the root.
  double a = lo, fa = flo, b = hi, fb = fhi;
  double c = a, fc = fa, d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 500; ++it) {
    if ((fb < 0) == (fc < 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    if (std::abs(fb) <= tol) return b;
    const double slack = 2 * eps * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= slack || m == 0) return b;
    if (std::abs(e) >= slack && std::abs(fa) > std::abs(fb)) {
      double p, q, s = fb / fa;
      if (a == c) {
        p = 2 * m * s;
        q = 1 - s;
      } else {
        double r = fb / fc;
        q = fa / fc;
        p = s * (2 * m * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2 * p < std::min(3 * m * q - std::abs(slack * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > slack ? d : (m > 0 ? slack : -slack);
    fb = f(b);
  }
  return b;
}

namespace {

double norm_inf(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

bool finite(const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

}  // namespace

Vec2 solve_2d(const std::function<Vec2(Vec2)>& F, Vec2 x, double tol, int max_iter) {
  Vec2 fx = F(x);
  if (!finite(fx)) throw NoConvergence("system is not finite at the initial guess");
  for (int it = 0; it < max_iter; ++it) {
    double r = norm_inf(fx);
    if (r <= tol) return x;
    double jac[2][2];
    for (int col = 0; col < 2; ++col) {
      double h = 1e-7 * std::max(1.0, std::abs(x[col]));
      Vec2 xp = x, xm = x;
      xp[col] += h;
      xm[col] -= h;
      Vec2 fp = F(xp), fm = F(xm);
      for (int row = 0; row < 2; ++row) jac[row][col] = (fp[row] - fm[row]) / (2 * h);
    }
    double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (!std::isfinite(det) || det == 0) throw NoConvergence("singular Jacobian");
    Vec2 step = {(jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det, (jac[0][0] * fx[1] - jac[1][0] * fx[0]) / det};
    double lambda = 1;
    for (;;) {
      Vec2 trial = {x[0] - lambda * step[0], x[1] - lambda * step[1]};
      Vec2 ft = F(trial);
      if (finite(ft) && norm_inf(ft) <= (1 - 1e-4 * lambda) * r) {
        x = trial;
        fx = ft;
        break;
      }
      lambda /= 2;
      if (lambda < 1e-10) throw NoConvergence("line search stalled at residual " + std::to_string(r));
    }
  }
  if (norm_inf(fx) <= tol) return x;
  throw NoConvergence("damped Newton exhausted " + std::to_string(max_iter) + " iterations");
}

Complex newton_complex(const std::function<Complex(Complex)>& f, const std::function<Complex(Complex)>& df,
                       Complex s, double tol, int max_iter) {
  Complex fs = f(s);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fs) <= tol) return s;
    Complex d = df(s);
    if (!(std::abs(d) > 1e-14)) throw DegenerateDerivative("derivative vanished during Newton iteration");
    Complex step = fs / d;
    double lambda = 1;
    for (int halvings = 0;; ++halvings) {
      Complex trial = s - lambda * step;
      Complex ft = f(trial);
      bool ok = std::isfinite(std::abs(ft));
      if (!ok && halvings == 30) throw NoConvergence("complex Newton left the domain of f");
      if (ok && (std::abs(ft) < std::abs(fs) || halvings == 30)) {
        s = trial;
        fs = ft;
        break;
      }
      lambda /= 2;
    }
  }
  if (std::abs(fs) <= tol) return s;
  throw NoConvergence("complex Newton did not reach |f| <= " + std::to_string(tol));
}

}  // namespace biortho
