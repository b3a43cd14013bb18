#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "biortho/chebyshev.hpp"
#include "biortho/conformal.hpp"
#include "biortho/potentials.hpp"

namespace biortho {

enum class EdgeRegime { HardEdge, SoftEdge, CriticalEdge };

std::string to_string(EdgeRegime r);

struct EdgeConstants {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// A point of the upper arc together with the real image y = J(s) and dy/dphi.
struct ArcPoint {
  Complex s;
  Complex ds;
  double y = 0.0;
  double dy = 0.0;
};
ArcPoint arc_point(const ConformalMap& m, const CurveSamples& curve, double phi);

/// Tabulated density in the curve angle: mu(phi) = psi(y(phi)) |dy/dphi| is
/// smooth on [0, pi], so a Chebyshev fit gives accurate integrals, and a
/// dense (x, CDF) table serves distribution queries.
struct DensityCache {
  Chebyshev mu;
  Chebyshev mu_integral;  // antiderivative from phi = 0
  double mass = 0.0;
  std::vector<double> xs;   // increasing support points
  std::vector<double> cdf;  // normalized CDF at xs
};

struct EquilibriumMeasure {
  double theta = 2.0;
  Potential potential = Potential::linear(1.0);
  EdgeRegime regime = EdgeRegime::HardEdge;
  double left = 0.0;
  double right = 1.0;
  ConformalMap map = ConformalMap::hard(2.0, 1.0);
  CurveSamples curve;
  std::optional<EdgeConstants> edge_constants;
  std::optional<double> lagrange_ell;
  std::shared_ptr<const DensityCache> density_cache;

  /// Density by quadrature (zero outside the support).
  double density(double x) const;
  /// Polar angle of the upper preimage of x in (left, right).
  double angle_of(double x) const;
  double cdf(double x) const;
  double quantile(double u) const;
  const DensityCache& cache() const;
};

/// The scalar parameter of the hard-edge map: (1/2 pi i) of the contour
/// integral of V'(J_c) J_c / s equals 1 + theta.
double solve_c(const Potential& v, double theta);

/// Parameters (c0, c1) of the soft-edge map from the two contour equations.
/// When several solutions exist the one whose ratio c0/c1 is closest to that
/// of `guess` is returned. Throws NoConvergence when none has c0 > c1 > 0.
Vec2 solve_c0_c1(const Potential& v, double theta, Vec2 guess);

/// Residuals of the two soft-edge equations at (c0, c1).
Vec2 soft_edge_residual(const Potential& v, double theta, double c0, double c1);

double density_hard(const Potential& v, double theta, double c, const CurveSamples& curve, double x);
double density_soft(const Potential& v, double theta, double c0, double c1, const CurveSamples& curve, double x);

/// Closed-form density for V = rho x and theta = 2.
double laguerre_density_closed_form(double rho, double x);

/// psi = Im N_in(I_+(x)) / (pi x) with the polynomial N_in for V = tau x^2 + rho x.
double quadratic_density_hard(double tau, double rho, double theta, double c, const CurveSamples& curve, double x);
/// Soft-edge analogue, available for theta = 2 and tau = 1.
double quadratic_density_soft(double tau, double rho, double theta, double c0, double c1, const CurveSamples& curve,
                              double x);

EdgeConstants edge_constants(const Potential& v, double theta, double c, const CurveSamples& curve);

/// Hard-edge measure for a given c (no validity checks beyond construction).
EquilibriumMeasure make_hard_measure(const Potential& v, double theta, double c);
EquilibriumMeasure make_soft_measure(const Potential& v, double theta, double c0, double c1);

/// Builds the hard-edge candidate and decides the regime from d1 and the
/// sign of the density; falls back to the soft-edge construction. Throws
/// Unclassifiable when neither candidate validates.
EquilibriumMeasure classify_edge(const Potential& v, double theta);

/// d1 of the hard-edge candidate for V = tau x^2 + rho x.
double hard_edge_d1(double tau, double rho, double theta);
/// Bisection on rho for a sign change of d1 within [lo, hi].
double locate_critical_rho(double tau, double theta, double lo, double hi, double tol);

struct EulerLagrangeReport {
  double max_dev_on_support = 0.0;
  double min_slack_off_support = 0.0;
  double ell_estimate = 0.0;
  std::vector<double> values_in;
  std::vector<double> values_out;
};

/// Effective potential L(x) = int log|x-y| + log|x^theta - y^theta| dmu(y) - V(x).
double effective_potential(const EquilibriumMeasure& m, double x);
EulerLagrangeReport verify_euler_lagrange(const EquilibriumMeasure& m, const std::vector<double>& grid_in,
                                          const std::vector<double>& grid_out);

/// Density at each grid point, evaluated in parallel.
std::vector<double> density_on_grid(const EquilibriumMeasure& m, const std::vector<double>& xs);

/// Mass of the density, integrated in x with edge substitutions.
double total_mass(const EquilibriumMeasure& m);

/// Cauchy-integral solution N_0 of the scalar boundary problem on the curve,
/// built from U(s) = V'(J(s)) J(s).
class ResolventData {
 public:
  ResolventData(const EquilibriumMeasure& m);
  Complex u(Complex s) const;
  Complex du(Complex s) const;
  /// N_0 inside the curve (continued up to the curve) or outside.
  Complex n0_inside(Complex s) const;
  Complex n0_outside(Complex s) const;
  Complex n0(Complex s) const { return inside(s) ? n0_inside(s) : n0_outside(s); }
  bool inside(Complex s) const { return curve_.inside(s); }

 private:
  Complex cauchy(Complex s, bool inside) const;
  ConformalMap map_;
  CurveSamples curve_;
  Potential potential_;
};

/// Least-squares slope of log y against log x.
double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace biortho
