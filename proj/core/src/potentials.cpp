#include "biortho/potentials.hpp"

#include <cmath>
#include <sstream>

#include "biortho/errors.hpp"

namespace biortho {

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad number '" + item + "' in potential spec");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw InvalidArgument("bad number '" + item + "' in potential spec");
    out.push_back(v);
  }
  return out;
}

template <class T>
T horner(const std::vector<double>& c, const T& x, int order) {
  T acc(0);
  for (int k = static_cast<int>(c.size()) - 1; k >= order; --k) {
    double factor = 1;
    for (int m = 0; m < order; ++m) factor *= k - m;
    acc = acc * x + T(c[k] * factor);
  }
  return acc;
}

}  // namespace

Potential Potential::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw InvalidArgument("polynomial potential needs at least one coefficient");
  Potential p;
  p.kind_ = PotentialKind::polynomial;
  p.coeffs_ = std::move(coeffs);
  return p;
}

Potential Potential::linear(double rho) {
  Potential p;
  p.kind_ = PotentialKind::linear;
  p.coeffs_ = {0.0, rho};
  return p;
}

Potential Potential::quadratic(double tau, double rho) {
  if (!(tau > 0)) throw InvalidArgument("quadratic potential needs tau > 0");
  Potential p;
  p.kind_ = PotentialKind::quadratic;
  p.coeffs_ = {0.0, rho, tau};
  return p;
}

Potential Potential::custom(Fn v, Fn dv, Fn d2v, std::string name) {
  if (!v || !dv || !d2v) throw InvalidArgument("custom potential needs V, V' and V''");
  Potential p;
  p.kind_ = PotentialKind::custom;
  p.coeffs_.clear();
  p.v_ = std::move(v);
  p.dv_ = std::move(dv);
  p.d2v_ = std::move(d2v);
  p.name_ = std::move(name);
  return p;
}

Potential Potential::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::vector<double> args = colon == std::string::npos ? std::vector<double>{} : parse_list(spec.substr(colon + 1));
  if (kind == "linear") {
    if (args.size() != 1) throw InvalidArgument("linear potential takes one argument (rho)");
    return linear(args[0]);
  }
  if (kind == "quadratic") {
    if (args.size() != 2) throw InvalidArgument("quadratic potential takes two arguments (tau,rho)");
    return quadratic(args[0], args[1]);
  }
  if (kind == "polynomial") return polynomial(args);
  throw InvalidArgument("unknown potential kind '" + kind + "'");
}

double Potential::rho() const {
  if (kind_ != PotentialKind::linear && kind_ != PotentialKind::quadratic) {
    throw InvalidArgument("rho is defined for linear and quadratic potentials only");
  }
  return coeffs_[1];
}

double Potential::tau() const {
  if (kind_ != PotentialKind::quadratic) throw InvalidArgument("tau is defined for quadratic potentials only");
  return coeffs_[2];
}

double Potential::eval(double x, int order) const {
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  if (kind_ == PotentialKind::custom) return order == 0 ? v_(x) : order == 1 ? dv_(x) : d2v_(x);
  return horner<double>(coeffs_, x, order);
}

Real Potential::eval(const Real& x, int order) const {
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  if (kind_ == PotentialKind::custom) return Real(eval(to_double(x), order));
  return horner<Real>(coeffs_, x, order);
}

std::complex<double> Potential::eval(std::complex<double> z, int order) const {
  if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
  if (kind_ == PotentialKind::custom) throw InvalidArgument("custom potentials have no complex extension");
  return horner<std::complex<double>>(coeffs_, z, order);
}

std::string Potential::str() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case PotentialKind::linear:
      os << "linear:" << coeffs_[1];
      break;
    case PotentialKind::quadratic:
      os << "quadratic:" << coeffs_[2] << "," << coeffs_[1];
      break;
    case PotentialKind::polynomial:
      os << "polynomial:";
      for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? "," : "") << coeffs_[k];
      break;
    case PotentialKind::custom:
      os << name_;
      break;
  }
  return os.str();
}

double potential_eval(const Potential& v, double x, int order) { return v.eval(x, order); }

void Weight::validate() const {
  if (!(alpha > -1)) throw InvalidArgument("weight exponent alpha must exceed -1");
  if (n_scale < 1) throw InvalidArgument("weight n_scale must be a positive integer");
  if (is_gamma_type() && !(potential.rho() > 0)) {
    throw InvalidArgument("linear potential needs rho > 0 for finite moments");
  }
}

double Weight::log_eval(double x) const { return alpha * std::log(x) - n_scale * potential.eval(x); }

double Weight::eval(double x) const { return std::exp(log_eval(x)); }

Real Weight::log_eval(const Real& x) const { return alpha * log(x) - n_scale * potential.eval(x); }

GrowthReport check_growth(const Potential& v, const std::vector<double>& probe_grid) {
  std::vector<double> ratios;
  std::vector<double> xs;
  for (double x : probe_grid) {
    if (x > std::exp(1.0)) {
      xs.push_back(x);
      ratios.push_back(v.eval(x) / std::log(x));
    }
  }
  GrowthReport report;
  if (ratios.size() < 4) return report;
  report.final_ratio = ratios.back();
  report.pass = report.final_ratio > 0;
  for (std::size_t i = ratios.size() / 2 + 1; i < ratios.size(); ++i) {
    if (!(ratios[i] > ratios[i - 1])) {
      report.pass = false;
      report.first_decrease = xs[i];
      break;
    }
  }
  return report;
}

HardEdgeConditions check_one_cut_hard_conditions(const Potential& v, const std::vector<double>& grid) {
  HardEdgeConditions report;
  for (double x : grid) {
    if (!(x > 0)) throw InvalidArgument("condition grid must lie in (0, inf)");
    bool ok_i = v.radial_derivative(x) > 0;
    bool ok_ii = v.eval(x, 2) >= 0;
    if ((!ok_i || !ok_ii) && !report.first_violation) report.first_violation = x;
    report.cond_i = report.cond_i && ok_i;
    report.cond_ii = report.cond_ii && ok_ii;
  }
  return report;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw InvalidArgument("log_grid needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  return out;
}

std::vector<double> default_condition_grid() { return log_grid(1e-6, 1e6, 2000); }

}  // namespace biortho
