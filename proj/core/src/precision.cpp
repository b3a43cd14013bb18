#include "biortho/precision.hpp"

#include <cmath>
#include <sstream>

#include "biortho/errors.hpp"

namespace biortho {

void PrecisionContext::validate() const {
  if (mantissa_bits < 64) {
    throw InvalidArgument("mantissa_bits must be >= 64, got " + std::to_string(mantissa_bits));
  }
  if (!(target_tol > 0.0)) {
    throw InvalidArgument("target_tol must be positive");
  }
}

unsigned PrecisionContext::digits10() const {
  return static_cast<unsigned>(std::ceil(mantissa_bits * std::log10(2.0))) + 1;
}

Real PrecisionContext::epsilon() const {
  PrecisionGuard guard(*this);
  return boost::multiprecision::ldexp(Real(1), 1 - static_cast<int>(mantissa_bits));
}

PrecisionGuard::PrecisionGuard(const PrecisionContext& ctx)
    : saved_digits10_(Real::default_precision()) {
  ctx.validate();
  Real::default_precision(ctx.digits10());
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits10_); }

std::string to_decimal(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits - 1);
  os << std::scientific << x;
  return os.str();
}

}  // namespace biortho
