#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace knockout {

using Rational = mpq_class;

/// Default absolute tolerance for comparing probabilities in float mode.
inline constexpr double kDefaultTolerance = 1e-9;

/// Comparison and conversion hooks that let the kernel and distribution code
/// run unchanged over exact rationals and doubles.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }
  static bool is_zero(double a, double tol) { return std::abs(a) <= tol; }
  static double to_double(double a) { return a; }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool equal(const Rational& a, const Rational& b, double) { return a == b; }
  static bool is_zero(const Rational& a, double) { return sgn(a) == 0; }
  static double to_double(const Rational& a) { return a.get_d(); }
  static Rational from_rational(const Rational& q) { return q; }
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
};

/// Parses "p/q", an integer, or a finite decimal such as "-0.125" exactly.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" (or "p" when q = 1) rendering.
std::string format_rational(const Rational& q);

}  // namespace knockout
