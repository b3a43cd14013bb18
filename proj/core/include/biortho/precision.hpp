#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace biortho {

/// Software float with run-time mantissa length. Expression templates are
/// disabled so that `auto` always yields a value.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

struct PrecisionContext {
  unsigned mantissa_bits = 256;
  double target_tol = 1e-30;

  void validate() const;
  unsigned digits10() const;
  /// 2^(1 - mantissa_bits), i.e. the unit roundoff of the context.
  Real epsilon() const;
};

/// Installs the context's precision as the default for newly created Reals
/// and restores the previous default on destruction.
///
/// The MPFR backend keeps its default precision in process-wide state, so two
/// threads must not hold guards with different precisions at the same time.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(const PrecisionContext& ctx);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits10_;
};

/// Decimal rendering with `digits` significant digits (scientific notation).
std::string to_decimal(const Real& x, int digits = 40);

/// Copy of `x` carried at the current default precision. Arithmetic keeps the
/// precision of its operands, so caller-supplied values are promoted on entry.
inline Real promote(const Real& x) { return Real(x, Real::default_precision()); }

inline double to_double(const Real& x) { return x.convert_to<double>(); }

}  // namespace biortho
