#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace revcat {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a finite decimal ("0.125", "-2.5e-3") into an
/// exact rational in lowest terms. Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

/// Approximate value for display only.
double to_double(const Rational& value);

/// Exact base^exponent for a rational exponent when the result is rational.
/// Throws Error(NonRationalPower) otherwise. Base must be positive.
Rational exact_power(const Rational& base, const Rational& exponent);

/// Equality and order tests that optionally absorb an absolute slack epsilon.
/// The default (epsilon = 0) is exact.
struct Tolerance {
  Rational epsilon = 0;

  bool exact() const { return sgn(epsilon) == 0; }
  bool equal(const Rational& lhs, const Rational& rhs) const;
  /// lhs > rhs by a margin strictly larger than epsilon.
  bool greater(const Rational& lhs, const Rational& rhs) const;
  bool less(const Rational& lhs, const Rational& rhs) const { return greater(rhs, lhs); }
};

}  // namespace revcat
