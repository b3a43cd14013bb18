#pragma once

#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "biortho/errors.hpp"

namespace biortho {

/// Chebyshev series on [a, b] fitted at first-kind nodes, with an exact
/// antiderivative. Series convention: f = c_0/2 + sum_{k>=1} c_k T_k.
class Chebyshev {
 public:
  Chebyshev() = default;

  template <class F>
  Chebyshev(F&& f, double a, double b, int n) : a_(a), b_(b), c_(n, 0.0) {
    if (n < 2 || !(a < b)) throw InvalidArgument("Chebyshev fit needs n >= 2 and a < b");
    const double pi = boost::math::constants::pi<double>();
    std::vector<double> fv(n);
    for (int k = 0; k < n; ++k) {
      double y = std::cos(pi * (k + 0.5) / n);
      fv[k] = f(0.5 * (b - a) * y + 0.5 * (b + a));
    }
    for (int j = 0; j < n; ++j) {
      double sum = 0;
      for (int k = 0; k < n; ++k) sum += fv[k] * std::cos(pi * j * (k + 0.5) / n);
      c_[j] = 2.0 * sum / n;
    }
  }

  double operator()(double x) const {
    double y = (2.0 * x - a_ - b_) / (b_ - a_);
    double d = 0, dd = 0;
    for (int j = static_cast<int>(c_.size()) - 1; j >= 1; --j) {
      double sv = d;
      d = 2.0 * y * d - dd + c_[j];
      dd = sv;
    }
    return y * d - dd + 0.5 * c_[0];
  }

  /// Antiderivative vanishing at a.
  Chebyshev integral() const {
    Chebyshev out;
    out.a_ = a_;
    out.b_ = b_;
    const int n = static_cast<int>(c_.size());
    out.c_.assign(n, 0.0);
    const double con = 0.25 * (b_ - a_);
    double sum = 0, fac = 1;
    for (int j = 1; j < n - 1; ++j) {
      out.c_[j] = con * (c_[j - 1] - c_[j + 1]) / j;
      sum += fac * out.c_[j];
      fac = -fac;
    }
    out.c_[n - 1] = con * c_[n - 2] / (n - 1);
    sum += fac * out.c_[n - 1];
    out.c_[0] = 2.0 * sum;
    return out;
  }

  /// Magnitude of the trailing coefficients, a cheap accuracy indicator.
  double tail() const {
    const int n = static_cast<int>(c_.size());
    double t = 0;
    for (int j = std::max(0, n - 3); j < n; ++j) t = std::max(t, std::abs(c_[j]));
    return t;
  }

  double lower() const { return a_; }
  double upper() const { return b_; }
  const std::vector<double>& coefficients() const { return c_; }

 private:
  double a_ = 0, b_ = 1;
  std::vector<double> c_;
};

}  // namespace biortho
