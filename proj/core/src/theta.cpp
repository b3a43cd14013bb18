#include "biortho/theta.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "biortho/errors.hpp"

namespace biortho {

namespace {

void check_range(double value) {
  if (!std::isfinite(value) || value < 1.0) {
    throw InvalidArgument("theta must be a finite number >= 1, got " + std::to_string(value));
  }
}

long parse_long(const std::string& s) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidArgument("not an integer: '" + s + "'");
  return out;
}

}  // namespace

Theta Theta::from_double(double value) {
  check_range(value);
  Theta t;
  t.value_ = value;
  return t;
}

Theta Theta::from_fraction(long a, long b) {
  if (a <= 0 || b <= 0) throw InvalidArgument("theta fraction needs positive integers");
  long g = std::gcd(a, b);
  a /= g;
  b /= g;
  Theta t;
  t.value_ = static_cast<double>(a) / static_cast<double>(b);
  check_range(t.value_);
  t.fraction_ = Fraction{a, b};
  return t;
}

Theta Theta::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    return from_fraction(parse_long(text.substr(0, slash)), parse_long(text.substr(slash + 1)));
  }
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    return from_fraction(parse_long(text), 1);
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse theta '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument("cannot parse theta '" + text + "'");
  return from_double(v);
}

Real Theta::real() const {
  if (fraction_) return Real(fraction_->a) / Real(fraction_->b);
  return Real(value_);
}

std::string Theta::str() const {
  if (fraction_) return std::to_string(fraction_->a) + "/" + std::to_string(fraction_->b);
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

}  // namespace biortho
