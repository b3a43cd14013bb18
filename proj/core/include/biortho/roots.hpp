#pragma once

#include <array>
#include <complex>
#include <functional>

namespace biortho {

using Vec2 = std::array<double, 2>;
using Complex = std::complex<double>;

/// Root of a continuous scalar function by a Brent-type bracketing iteration
/// (inverse quadratic / secant steps guarded by bisection). When f(lo) and
/// f(hi) share a sign, hi is doubled up to 60 times.
/// Returns x with |f(x)| <= tol, or the midpoint of a bracket that can no
/// longer be split in floating point.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Damped Newton for F: R^2 -> R^2 with a central-difference Jacobian and a
/// backtracking line search. Returns a point with max(|F_0|, |F_1|) <= tol.
Vec2 solve_2d(const std::function<Vec2(Vec2)>& F, Vec2 guess, double tol, int max_iter = 100);

/// Newton iteration in the complex plane with step halving whenever a full
/// step increases |f|.
Complex newton_complex(const std::function<Complex(Complex)>& f, const std::function<Complex(Complex)>& df,
                       Complex guess, double tol, int max_iter = 100);

}  // namespace biortho
