#pragma once

#include <gmpxx.h>

#include <string>

namespace sgd {

// Arbitrary-precision rational scalar. mpq_class keeps values canonical
// (lowest terms, positive denominator) after every arithmetic operation,
// which is exactly the invariant the exact path relies on.
using Rat = mpq_class;

Rat rat(long num, long den = 1);

// "p" or "p/q" with q > 1; canonical form, so equal values print equally.
std::string rat_to_string(const Rat& x);

// Accepts "p/q", plain integers, and decimal literals such as "0.125" or
// "-3.5e-2" (converted exactly).
Rat parse_rational(const std::string& text);

double to_double(const Rat& x);

// base^exp with integer exp of either sign (base nonzero when exp < 0).
Rat rat_pow(const Rat& base, long exp);

// Rational bracketing of sqrt(x) for x >= 0, tight to 2^-bits:
// sqrt_lower(x)^2 <= x <= sqrt_upper(x)^2.
Rat sqrt_lower(const Rat& x, unsigned bits = 64);
Rat sqrt_upper(const Rat& x, unsigned bits = 64);

// Selects the computation path for operations that exist in both exact
// and floating flavours, plus the comparison tolerance used by float
// checks (absolute, per the reporting conventions).
struct NumericPolicy {
  enum class Mode { exact, float64 };
  Mode mode = Mode::exact;
  double abs_tol = 1e-12;

  static NumericPolicy exact() { return {Mode::exact, 1e-12}; }
  static NumericPolicy float64(double tol = 1e-12) {
    return {Mode::float64, tol};
  }
};

}  // namespace sgd
