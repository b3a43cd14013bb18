#include "biortho/bimoments.hpp"

#include <ostream>

#include "biortho/errors.hpp"

namespace biortho {

namespace {

Real gamma_moment(const Weight& w, const Real& exponent) {
  Real s = exponent + Real(w.alpha) + 1;
  Real lambda = Real(w.n_scale) * Real(w.potential.rho());
  return exp(lgamma(s) - s * log(lambda));
}

bool use_closed_form(const Weight& w, MomentMethod method) {
  if (method == MomentMethod::closed_form && !w.is_gamma_type()) {
    throw InvalidArgument("closed-form bimoments need a linear potential");
  }
  return method != MomentMethod::quadrature && w.is_gamma_type();
}

// All (j, k) moments at once: the integrand shares log w(x) and log x.
std::vector<Real> quadrature_moments(const Weight& w, const Real& theta, int max_index, const PrecisionContext& ctx) {
  const int n = max_index + 1;
  auto integrand = [&](const Real& x, std::vector<Real>& out) {
    Real lx = log(x);
    Real lw = w.log_eval(x);
    for (int j = 0; j < n; ++j) {
      Real v = exp(lw + j * theta * lx);
      for (int k = 0; k < n; ++k) {
        out[j * n + k] = v;
        v *= x;
      }
    }
  };
  return integrate_semiaxis_multi<Real>(integrand, static_cast<std::size_t>(n * n), QuadratureSpec::for_context(ctx));
}

}  // namespace

BimomentTable::BimomentTable(const Weight& w, const Theta& theta, int max_index, const PrecisionContext& ctx,
                             MomentMethod method)
    : weight_(w), theta_(theta), max_index_(max_index), ctx_(ctx) {
  if (max_index < 0) throw InvalidArgument("bimoment table needs max_index >= 0");
  w.validate();
  PrecisionGuard guard(ctx);
  const Real th = theta.real();
  if (use_closed_form(w, method)) {
    entries_.reserve((max_index + 1) * (max_index + 1));
    for (int j = 0; j <= max_index; ++j) {
      for (int k = 0; k <= max_index; ++k) entries_.push_back(gamma_moment(w, Real(k) + j * th));
    }
  } else {
    entries_ = quadrature_moments(w, th, max_index, ctx);
  }
  for (const auto& m : entries_) {
    if (!(m > 0) || !isfinite(m)) throw NonPositive("bimoment is not a finite positive number");
  }
}

Real bimoment(const Weight& w, const Theta& theta, int j, int k, const PrecisionContext& ctx, MomentMethod method) {
  if (j < 0 || k < 0) throw InvalidArgument("bimoment indices must be non-negative");
  w.validate();
  PrecisionGuard guard(ctx);
  const Real exponent = Real(k) + j * theta.real();
  if (use_closed_form(w, method)) return gamma_moment(w, exponent);
  auto f = [&](const Real& x) { return exp(w.log_eval(x) + exponent * log(x)); };
  return integrate_semiaxis<Real>(f, QuadratureSpec::for_context(ctx));
}

Real hankel_det(const BimomentTable& table, int n) {
  if (n < 0 || n > table.max_index() + 1) throw InvalidArgument("hankel_det: n out of range");
  PrecisionGuard guard(table.context());
  std::vector<Real> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = table(i, j);
  Real det(1);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (abs(a[r * n + col]) > abs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0) throw NonPositive("bimoment block is singular at working precision");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      Real f = a[r * n + col] / a[col * n + col];
      for (int j = col + 1; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
    }
  }
  if (!(det > 0)) throw NonPositive("H_" + std::to_string(n) + " = " + to_decimal(det, 10) + " is not positive");
  return det;
}

Real partition_function(const BimomentTable& table, int n) {
  Real h = hankel_det(table, n);
  PrecisionGuard guard(table.context());
  Real fact(1);
  for (int i = 2; i <= n; ++i) fact *= i;
  return fact * h;
}

void write_bimoments_csv(std::ostream& os, const BimomentTable& table) {
  os << "j,k,m_jk\n";
  for (int j = 0; j <= table.max_index(); ++j)
    for (int k = 0; k <= table.max_index(); ++k) os << j << ',' << k << ',' << to_decimal(table(j, k), 40) << '\n';
}

}  // namespace biortho
