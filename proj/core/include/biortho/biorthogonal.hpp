#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include "biortho/bimoments.hpp"

namespace biortho {

enum class Family { p, q };

/// Polynomials p_j, q_j with int p_j(x) q_k(x^theta) w(x) dx = delta_jk and
/// equal positive leading coefficients kappa_j. Immutable once built.
class BiorthogonalSystem {
 public:
  using Coeffs = std::vector<std::vector<Real>>;

  BiorthogonalSystem(std::shared_ptr<const BimomentTable> table, int jmax, Coeffs p, Coeffs q, std::vector<Real> kappa);

  int jmax() const { return jmax_; }
  const Theta& theta() const { return table_->theta(); }
  const Weight& weight() const { return table_->weight(); }
  const PrecisionContext& context() const { return table_->context(); }
  const BimomentTable& table() const { return *table_; }
  /// Row j holds the ascending coefficients of p_j (length j + 1).
  const Coeffs& p_coeffs() const { return p_; }
  const Coeffs& q_coeffs() const { return q_; }
  const Coeffs& coeffs(Family f) const { return f == Family::p ? p_ : q_; }
  const std::vector<Real>& kappa() const { return kappa_; }

  /// Copy with one coefficient shifted by `delta`; for sensitivity tests.
  BiorthogonalSystem perturbed(Family f, int j, int power, const Real& delta) const;

 private:
  std::shared_ptr<const BimomentTable> table_;
  int jmax_;
  Coeffs p_, q_;
  std::vector<Real> kappa_;
};

/// Builds p_0..p_jmax and q_0..q_jmax from an LDU factorization of the
/// bimoment block. Throws PrecisionExhausted when the moment-based
/// orthogonality residual of the result exceeds 1e-10.
BiorthogonalSystem build_system(const Weight& w, const Theta& theta, int jmax, const PrecisionContext& ctx,
                                MomentMethod method = MomentMethod::automatic);
BiorthogonalSystem build_system(std::shared_ptr<const BimomentTable> table, int jmax);

Real eval_poly(const BiorthogonalSystem& sys, Family f, int j, const Real& x);
std::complex<double> eval_poly(const BiorthogonalSystem& sys, Family f, int j, std::complex<double> x);

/// Bordered-determinant formula divided by sqrt(H_j H_{j+1}). Independent of
/// the factorization used by build_system.
Real poly_via_determinant(const BimomentTable& table, Family f, int j, const Real& x);

/// Multiple-integral representation for j <= 2, evaluated by tensor-product
/// quadrature in double precision. For Family::q the argument is the
/// polynomial variable itself (q_j(x), not q_j(x^theta)).
double poly_via_integral(const BimomentTable& table, Family f, int j, double x);

/// K_n(x, y) = sum_{j<n} p_j(x) q_j(y^theta) sqrt(w(x) w(y)).
Real kernel(const BiorthogonalSystem& sys, int n, const Real& x, const Real& y);

/// u_j(k) for x^a p_k = sum_j u_j(k) p_{k+a-j} and v_j(k) for
/// x^b q_k = sum_j v_j(k) q_{k+b-j}, j = 0..a+b, with theta = a/b.
struct RecurrenceCoeffs {
  int k = 0;
  std::vector<Real> u;
  std::vector<Real> v;
};

/// u by quadrature of the inner products in the variable x = t^b (integer
/// powers only); v by combination of bimoments. The two routes are
/// independent, which makes u_j(k) = v_{a+b-j}(k+a-j) a real check.
RecurrenceCoeffs recurrence_coeffs(const BiorthogonalSystem& sys, int k);
/// Both u and v from bimoment combinations.
RecurrenceCoeffs recurrence_coeffs_from_moments(const BiorthogonalSystem& sys, int k);

/// Largest coefficient of x^a p_k - sum u_j(k) p_{k+a-j} and of the matching
/// q identity.
Real recurrence_residual(const BiorthogonalSystem& sys, const RecurrenceCoeffs& rc);
/// Largest |u_j(k) - v_{a+b-j}(k+a-j)| over j where the right side is defined.
Real symmetry_residual(const BiorthogonalSystem& sys, int k);

/// |sum_{k<n} p_k(x) q_k(y^theta) - CD right-hand side|.
Real verify_cd(const BiorthogonalSystem& sys, int n, const Real& x, const Real& y);

/// max_{j,k} |<p_j, q_k> - delta_jk| with the pairings integrated by quadrature.
Real verify_orthogonality(const BiorthogonalSystem& sys);
/// Same residual from bimoment combinations (no quadrature).
Real orthogonality_residual(const BiorthogonalSystem& sys);

/// CSV rows "j,power,p_coeff,q_coeff,kappa".
void write_coefficients_csv(std::ostream& os, const BiorthogonalSystem& sys);

}  // namespace biortho
