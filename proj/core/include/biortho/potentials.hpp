#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "biortho/precision.hpp"

namespace biortho {

enum class PotentialKind { polynomial, linear, quadratic, custom };

/// External field V on (0, inf) with its first two derivatives.
class Potential {
 public:
  using Fn = std::function<double(double)>;

  static Potential polynomial(std::vector<double> coeffs);
  /// V(x) = rho x.
  static Potential linear(double rho);
  /// V(x) = tau x^2 + rho x with tau > 0.
  static Potential quadratic(double tau, double rho);
  static Potential custom(Fn v, Fn dv, Fn d2v, std::string name = "custom");
  /// Parses "linear:RHO", "quadratic:TAU,RHO" or "polynomial:C0,C1,...".
  static Potential parse(const std::string& spec);

  PotentialKind kind() const { return kind_; }
  /// Ascending coefficients; empty for custom potentials.
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Slope for linear, linear coefficient for quadratic.
  double rho() const;
  double tau() const;

  double eval(double x, int order = 0) const;
  /// High-precision evaluation; custom potentials fall back to double.
  Real eval(const Real& x, int order = 0) const;
  /// Analytic continuation off the real axis; polynomial kinds only.
  std::complex<double> eval(std::complex<double> z, int order = 0) const;
  /// x V''(x) + V'(x), the integrand weight of the density formulas.
  double radial_derivative(double x) const { return x * eval(x, 2) + eval(x, 1); }

  std::string str() const;

 private:
  PotentialKind kind_ = PotentialKind::polynomial;
  std::vector<double> coeffs_{0.0};
  Fn v_, dv_, d2v_;
  std::string name_;
};

double potential_eval(const Potential& v, double x, int order);

/// w(x) = x^alpha exp(-n_scale V(x)).
struct Weight {
  double alpha = 0.0;
  int n_scale = 1;
  Potential potential = Potential::linear(1.0);

  void validate() const;
  double eval(double x) const;
  double log_eval(double x) const;
  Real log_eval(const Real& x) const;
  /// True when w is x^alpha e^{-lambda x}, enabling closed-form moments.
  bool is_gamma_type() const { return potential.kind() == PotentialKind::linear; }
  /// The e^{-x} weight.
  static Weight laguerre() { return Weight{}; }
};

/// Heuristic check that V(x)/log x grows without bound: on grid points beyond
/// e the ratio must be strictly increasing over the upper half of the grid and
/// end positive. A finite grid cannot prove the limit.
struct GrowthReport {
  bool pass = false;
  double final_ratio = 0.0;
  std::optional<double> first_decrease;
};
GrowthReport check_growth(const Potential& v, const std::vector<double>& probe_grid);

/// Sufficient conditions for a one-cut measure with a hard edge at 0:
/// (i) x V''(x) + V'(x) > 0 and (ii) V''(x) >= 0 for all x > 0, sampled on a grid.
struct HardEdgeConditions {
  bool cond_i = true;
  bool cond_ii = true;
  std::optional<double> first_violation;
};
HardEdgeConditions check_one_cut_hard_conditions(const Potential& v, const std::vector<double>& grid);

std::vector<double> log_grid(double lo, double hi, int n);
/// 2000 log-spaced points from 1e-6 to 1e6.
std::vector<double> default_condition_grid();

}  // namespace biortho
