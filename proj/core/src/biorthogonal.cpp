#include "biortho/biorthogonal.hpp"

#include <cmath>
#include <ostream>

#include "biortho/errors.hpp"

namespace biortho {

namespace {

using Coeffs = BiorthogonalSystem::Coeffs;

const Fraction& require_fraction(const BiorthogonalSystem& sys) {
  if (!sys.theta().is_rational()) throw IrrationalTheta("recurrences need theta given as an exact fraction a/b");
  return *sys.theta().fraction();
}

template <class T>
T horner(const std::vector<Real>& c, const T& x) {
  T acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + T(*it);
  return acc;
}

std::complex<double> horner_complex(const std::vector<Real>& c, std::complex<double> x) {
  std::complex<double> acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

// <f, g> = sum_i sum_l f_i g_l m_{l + row_shift, i + col_shift}.
Real pair(const BimomentTable& t, const std::vector<Real>& f, const std::vector<Real>& g, int row_shift,
          int col_shift) {
  Real s(0);
  for (std::size_t l = 0; l < g.size(); ++l) {
    Real row(0);
    for (std::size_t i = 0; i < f.size(); ++i) row += f[i] * t(static_cast<int>(l) + row_shift, static_cast<int>(i) + col_shift);
    s += g[l] * row;
  }
  return s;
}

// <x^a p_m, q_l> = <p_m, x^b q_l>; picks whichever moment layout fits the table.
Real pair_shifted(const BiorthogonalSystem& sys, int m, int l) {
  if (m < 0 || l < 0) return Real(0);
  if (m > sys.jmax() || l > sys.jmax()) throw OutOfRange("polynomial index beyond jmax");
  const Fraction& fr = require_fraction(sys);
  const int top = sys.table().max_index();
  if (m + fr.a <= top) return pair(sys.table(), sys.p_coeffs()[m], sys.q_coeffs()[l], 0, static_cast<int>(fr.a));
  if (l + fr.b <= top) return pair(sys.table(), sys.p_coeffs()[m], sys.q_coeffs()[l], static_cast<int>(fr.b), 0);
  throw OutOfRange("recurrence coefficient needs bimoments beyond the table");
}

std::vector<Real> shift_up(const std::vector<Real>& c, long by) {
  std::vector<Real> out(c.size() + by, Real(0));
  for (std::size_t i = 0; i < c.size(); ++i) out[i + by] = c[i];
  return out;
}

Real max_coeff_diff(std::vector<Real> lhs, const Coeffs& basis, const std::vector<Real>& coef, long top) {
  for (std::size_t j = 0; j < coef.size(); ++j) {
    long idx = top - static_cast<long>(j);
    if (idx < 0) continue;
    const auto& row = basis[idx];
    for (std::size_t i = 0; i < row.size(); ++i) lhs[i] -= coef[j] * row[i];
  }
  Real worst(0);
  for (const auto& v : lhs) worst = std::max<Real>(worst, abs(v));
  return worst;
}

Real pow_theta(const Theta& theta, const Real& y) {
  if (theta.is_rational() && theta.fraction()->b == 1) return pow(y, static_cast<int>(theta.fraction()->a));
  return pow(y, theta.real());
}

}  // namespace

BiorthogonalSystem::BiorthogonalSystem(std::shared_ptr<const BimomentTable> table, int jmax, Coeffs p, Coeffs q,
                                       std::vector<Real> kappa)
    : table_(std::move(table)), jmax_(jmax), p_(std::move(p)), q_(std::move(q)), kappa_(std::move(kappa)) {}

BiorthogonalSystem BiorthogonalSystem::perturbed(Family f, int j, int power, const Real& delta) const {
  BiorthogonalSystem copy = *this;
  auto& c = f == Family::p ? copy.p_ : copy.q_;
  if (j < 0 || j > jmax_ || power < 0 || power > j) throw OutOfRange("no such coefficient");
  PrecisionGuard guard(context());
  c[j][power] += delta;
  return copy;
}

BiorthogonalSystem build_system(const Weight& w, const Theta& theta, int jmax, const PrecisionContext& ctx,
                                MomentMethod method) {
  return build_system(std::make_shared<const BimomentTable>(w, theta, jmax, ctx, method), jmax);
}

BiorthogonalSystem build_system(std::shared_ptr<const BimomentTable> table, int jmax) {
  if (jmax < 0 || jmax > table->max_index()) throw InvalidArgument("jmax must lie within the bimoment table");
  PrecisionGuard guard(table->context());
  const int n = jmax + 1;
  // Doolittle M = L D U with unit triangular L, U. Leading minors are
  // positive, so no pivoting is needed.
  std::vector<std::vector<Real>> L(n, std::vector<Real>(n, Real(0))), U = L;
  std::vector<Real> D(n);
  const auto& M = *table;
  for (int k = 0; k < n; ++k) {
    Real d = M(k, k);
    for (int s = 0; s < k; ++s) d -= L[k][s] * D[s] * U[s][k];
    if (!(d > 0)) throw NonPositive("pivot " + std::to_string(k) + " of the bimoment block is not positive");
    D[k] = d;
    L[k][k] = U[k][k] = Real(1);
    for (int i = k + 1; i < n; ++i) {
      Real lo = M(i, k), up = M(k, i);
      for (int s = 0; s < k; ++s) {
        lo -= L[i][s] * D[s] * U[s][k];
        up -= L[k][s] * D[s] * U[s][i];
      }
      L[i][k] = lo / d;
      U[k][i] = up / d;
    }
  }
  // Column j of U^{-1} gives monic p_j, row j of L^{-1} gives monic q_j.
  Coeffs p(n), q(n);
  std::vector<Real> kappa(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Real> col(j + 1, Real(0)), row(j + 1, Real(0));
    col[j] = row[j] = Real(1);
    for (int i = j - 1; i >= 0; --i) {
      Real sc(0), sr(0);
      for (int s = i + 1; s <= j; ++s) {
        sc += U[i][s] * col[s];
        sr += row[s] * L[s][i];
      }
      col[i] = -sc;
      row[i] = -sr;
    }
    kappa[j] = 1 / sqrt(D[j]);
    for (auto& c : col) c *= kappa[j];
    for (auto& c : row) c *= kappa[j];
    p[j] = std::move(col);
    q[j] = std::move(row);
  }
  BiorthogonalSystem sys(std::move(table), jmax, std::move(p), std::move(q), std::move(kappa));
  Real residual = orthogonality_residual(sys);
  if (!(residual <= Real(1e-10))) {
    throw PrecisionExhausted("orthogonality residual " + to_decimal(residual, 6) +
                             " exceeds 1e-10; raise mantissa_bits or lower jmax");
  }
  return sys;
}

Real eval_poly(const BiorthogonalSystem& sys, Family f, int j, const Real& x) {
  if (j < 0) return Real(0);
  if (j > sys.jmax()) throw OutOfRange("polynomial index beyond jmax");
  PrecisionGuard guard(sys.context());
  return horner<Real>(sys.coeffs(f)[j], promote(x));
}

std::complex<double> eval_poly(const BiorthogonalSystem& sys, Family f, int j, std::complex<double> x) {
  if (j < 0) return 0.0;
  if (j > sys.jmax()) throw OutOfRange("polynomial index beyond jmax");
  return horner_complex(sys.coeffs(f)[j], x);
}

Real poly_via_determinant(const BimomentTable& table, Family f, int j, const Real& x_in) {
  if (j < 0 || j + 1 > table.max_index() + 1) throw OutOfRange("determinant formula needs j <= max_index");
  Real hj = hankel_det(table, j), hj1 = hankel_det(table, j + 1);
  PrecisionGuard guard(table.context());
  const Real x = promote(x_in);
  const int n = j + 1;
  // Bordered matrix: moment rows/columns 0..j-1 plus a row (p) or column (q)
  // of powers of x.
  std::vector<Real> a(n * n);
  Real xp(1);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < j; ++i) {
      if (f == Family::p) a[i * n + k] = table(i, k);
      else a[k * n + i] = table(k, i);
    }
    if (f == Family::p) a[j * n + k] = xp;
    else a[k * n + j] = xp;
    xp *= x;
  }
  Real det(1);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (abs(a[r * n + col]) > abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0) return Real(0);
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      Real m = a[r * n + col] / a[col * n + col];
      for (int c = col + 1; c < n; ++c) a[r * n + c] -= m * a[col * n + c];
    }
  }
  return det / sqrt(hj * hj1);
}

double poly_via_integral(const BimomentTable& table, Family f, int j, double x) {
  if (j < 0 || j > 2) throw InvalidArgument("the multiple-integral oracle supports j <= 2");
  if (j + 1 > table.max_index() + 1) throw OutOfRange("table too small for the normalization");
  const double norm = std::sqrt(to_double(hankel_det(table, j)) * to_double(hankel_det(table, j + 1)));
  if (j == 0) return 1.0 / norm;
  const Weight& w = table.weight();
  const double th = table.theta().value();
  QuadratureSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-11;
  auto factor = [&](double t) { return f == Family::p ? x - t : x - std::pow(t, th); };
  double value;
  if (j == 1) {
    value = integrate_semiaxis<double>([&](double t) { return factor(t) * w.eval(t); }, spec);
  } else {
    value = integrate_orthant(
                [&](const std::vector<double>& t) {
                  double vd = (t[1] - t[0]) * (std::pow(t[1], th) - std::pow(t[0], th));
                  return factor(t[0]) * factor(t[1]) * vd * w.eval(t[0]) * w.eval(t[1]);
                },
                2, spec) /
            2.0;
  }
  return value / norm;
}

Real kernel(const BiorthogonalSystem& sys, int n, const Real& x_in, const Real& y_in) {
  if (n < 0 || n > sys.jmax() + 1) throw OutOfRange("kernel size beyond jmax + 1");
  if (!(x_in > 0) || !(y_in > 0)) throw InvalidArgument("kernel arguments must be positive");
  PrecisionGuard guard(sys.context());
  const Real x = promote(x_in), y = promote(y_in);
  Real yt = pow_theta(sys.theta(), y);
  Real s(0);
  for (int j = 0; j < n; ++j) s += horner<Real>(sys.p_coeffs()[j], x) * horner<Real>(sys.q_coeffs()[j], yt);
  const Weight& w = sys.weight();
  return s * exp((w.log_eval(x) + w.log_eval(y)) / 2);
}

RecurrenceCoeffs recurrence_coeffs_from_moments(const BiorthogonalSystem& sys, int k) {
  const Fraction fr = require_fraction(sys);
  if (k < 0 || k + fr.a > sys.jmax()) throw OutOfRange("recurrence needs 0 <= k and k + a <= jmax");
  PrecisionGuard guard(sys.context());
  RecurrenceCoeffs rc;
  rc.k = k;
  for (long j = 0; j <= fr.a + fr.b; ++j) {
    rc.u.push_back(pair_shifted(sys, k, static_cast<int>(k + fr.a - j)));
    rc.v.push_back(pair_shifted(sys, static_cast<int>(k + fr.b - j), k));
  }
  return rc;
}

RecurrenceCoeffs recurrence_coeffs(const BiorthogonalSystem& sys, int k) {
  RecurrenceCoeffs rc = recurrence_coeffs_from_moments(sys, k);
  const Fraction fr = *sys.theta().fraction();
  PrecisionGuard guard(sys.context());
  const int count = static_cast<int>(fr.a + fr.b + 1);
  const Weight& w = sys.weight();
  const auto& pk = sys.p_coeffs()[k];
  // <f, g> = int f(t^b) g(t^a) b t^{b-1} w(t^b) dt: only integer powers of t.
  auto integrand = [&](const Real& t, std::vector<Real>& out) {
    Real x = pow(t, static_cast<int>(fr.b));
    Real ya = pow(t, static_cast<int>(fr.a));
    Real base = pow(x, static_cast<int>(fr.a)) * horner<Real>(pk, x) * Real(fr.b) * pow(t, static_cast<int>(fr.b - 1)) *
                exp(w.log_eval(x));
    for (int j = 0; j < count; ++j) {
      long l = k + fr.a - j;
      out[j] = l < 0 ? Real(0) : base * horner<Real>(sys.q_coeffs()[l], ya);
    }
  };
  rc.u = integrate_semiaxis_multi<Real>(integrand, count, QuadratureSpec::for_context(sys.context()));
  return rc;
}

Real recurrence_residual(const BiorthogonalSystem& sys, const RecurrenceCoeffs& rc) {
  const Fraction fr = require_fraction(sys);
  PrecisionGuard guard(sys.context());
  Real rp = max_coeff_diff(shift_up(sys.p_coeffs()[rc.k], fr.a), sys.p_coeffs(), rc.u, rc.k + fr.a);
  Real rq = max_coeff_diff(shift_up(sys.q_coeffs()[rc.k], fr.b), sys.q_coeffs(), rc.v, rc.k + fr.b);
  return std::max<Real>(rp, rq);
}

Real symmetry_residual(const BiorthogonalSystem& sys, int k) {
  const Fraction fr = require_fraction(sys);
  RecurrenceCoeffs rc = recurrence_coeffs(sys, k);
  PrecisionGuard guard(sys.context());
  Real worst(0);
  for (long j = 0; j <= fr.a + fr.b; ++j) {
    long kk = k + fr.a - j;
    if (kk < 0 || kk + fr.b > sys.jmax()) continue;
    // v_{a+b-j}(kk) = <p_{kk+b-(a+b-j)}, x^b q_kk> = <p_k, x^b q_kk>.
    Real v = pair_shifted(sys, k, static_cast<int>(kk));
    worst = std::max<Real>(worst, abs(rc.u[j] - v));
  }
  return worst;
}

Real verify_cd(const BiorthogonalSystem& sys, int n, const Real& x_in, const Real& y_in) {
  const Fraction fr = require_fraction(sys);
  if (n < 1 || n - 1 + fr.a > sys.jmax()) throw OutOfRange("CD check needs 1 <= n and n - 1 + a <= jmax");
  PrecisionGuard guard(sys.context());
  const Real x = promote(x_in), y = promote(y_in);
  const int a = static_cast<int>(fr.a), b = static_cast<int>(fr.b);
  Real denom = pow(x, a) - pow(y, a);
  if (abs(denom) < Real(1e-12)) throw DegeneratePoint("x^a and y^a coincide");
  const Real yt = pow_theta(sys.theta(), y);
  std::vector<Real> pv(n + a), qv(n + a);
  for (int j = 0; j < n + a; ++j) {
    pv[j] = horner<Real>(sys.p_coeffs()[j], x);
    qv[j] = horner<Real>(sys.q_coeffs()[j], yt);
  }
  Real lhs(0);
  for (int k = 0; k < n; ++k) lhs += pv[k] * qv[k];
  Real rhs(0);
  for (int l = 1; l <= a; ++l)
    for (int k = std::max(0, n - l); k <= n - 1; ++k) rhs += pair_shifted(sys, k, k + l) * pv[k + l] * qv[k];
  for (int l = 1; l <= b; ++l)
    for (int k = std::max(0, n - l); k <= n - 1; ++k) rhs -= pair_shifted(sys, k + l, k) * pv[k] * qv[k + l];
  return abs(lhs - rhs / denom);
}

Real verify_orthogonality(const BiorthogonalSystem& sys) {
  PrecisionGuard guard(sys.context());
  const int n = sys.jmax() + 1;
  const Weight& w = sys.weight();
  const Theta& theta = sys.theta();
  auto integrand = [&](const Real& x, std::vector<Real>& out) {
    Real wx = exp(w.log_eval(x));
    Real xt = pow_theta(theta, x);
    std::vector<Real> pv(n), qv(n);
    for (int j = 0; j < n; ++j) {
      pv[j] = horner<Real>(sys.p_coeffs()[j], x) * wx;
      qv[j] = horner<Real>(sys.q_coeffs()[j], xt);
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[j * n + k] = pv[j] * qv[k];
  };
  auto g = integrate_semiaxis_multi<Real>(integrand, n * n, QuadratureSpec::for_context(sys.context()));
  Real worst(0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) worst = std::max<Real>(worst, abs(g[j * n + k] - (j == k ? 1 : 0)));
  return worst;
}

Real orthogonality_residual(const BiorthogonalSystem& sys) {
  PrecisionGuard guard(sys.context());
  Real worst(0);
  for (int j = 0; j <= sys.jmax(); ++j)
    for (int k = 0; k <= sys.jmax(); ++k) {
      Real g = pair(sys.table(), sys.p_coeffs()[j], sys.q_coeffs()[k], 0, 0);
      worst = std::max<Real>(worst, abs(g - (j == k ? 1 : 0)));
    }
  return worst;
}

void write_coefficients_csv(std::ostream& os, const BiorthogonalSystem& sys) {
  os << "j,power,p_coeff,q_coeff,kappa\n";
  for (int j = 0; j <= sys.jmax(); ++j)
    for (int i = 0; i <= j; ++i)
      os << j << ',' << i << ',' << to_decimal(sys.p_coeffs()[j][i]) << ',' << to_decimal(sys.q_coeffs()[j][i]) << ','
         << to_decimal(sys.kappa()[j]) << '\n';
}

}  // namespace biortho
