#pragma once

#include <optional>
#include <string>

#include "biortho/precision.hpp"

namespace biortho {

/// Exact ratio a/b in lowest terms.
struct Fraction {
  long a = 1;
  long b = 1;
};

/// Interaction exponent. Carries an exact fraction when one was supplied so
/// that recurrence features can use integer a and b.
class Theta {
 public:
  Theta() = default;
  static Theta from_double(double value);
  static Theta from_fraction(long a, long b);
  /// Accepts "a/b", an integer literal (exact), or a decimal (inexact).
  static Theta parse(const std::string& text);

  double value() const { return value_; }
  const std::optional<Fraction>& fraction() const { return fraction_; }
  bool is_rational() const { return fraction_.has_value(); }
  /// Value at the current Real precision; exact a/b when rational.
  Real real() const;
  std::string str() const;

 private:
  double value_ = 1.0;
  std::optional<Fraction> fraction_;
};

}  // namespace biortho
