#pragma once

// Numeric-field contract shared by every inference kernel. Two instantiations
// exist: exact rationals (GMP) and IEEE doubles.

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace ift {

using Rational = mpq_class;

/// Float-mode comparison slack used wherever the exact mode compares with ==.
inline constexpr double kFloatTolerance = 1e-12;

template <class T>
struct Field;

template <>
struct Field<double> {
  static constexpr bool kExact = false;
  static constexpr std::string_view kName = "float";

  static double from_ratio(std::int64_t num, std::int64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static bool equal(double a, double b, double tol = kFloatTolerance) {
    return std::fabs(a - b) <= tol;
  }
  /// 17 significant digits; round-trips every finite double.
  static std::string to_string(double x);
};

template <>
struct Field<Rational> {
  static constexpr bool kExact = true;
  static constexpr std::string_view kName = "rational";

  static Rational from_ratio(std::int64_t num, std::int64_t den);
  /// Exact binary value of x.
  static Rational from_double(double x);
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static bool equal(const Rational& a, const Rational& b, double = 0.0) {
    return a == b;
  }
  /// Always "p/q", including integers ("1/1").
  static std::string to_string(const Rational& x);
};

template <class T>
concept NumericField = requires(T a, T b) {
  { Field<T>::kExact } -> std::convertible_to<bool>;
  { Field<T>::to_double(a) } -> std::convertible_to<double>;
  { Field<T>::abs(a) } -> std::convertible_to<T>;
  { Field<T>::equal(a, b) } -> std::convertible_to<bool>;
  { T(a + b) };
  { T(a * b) };
  { T(a / b) };
  { a < b } -> std::convertible_to<bool>;
};

/// Parses "p/q" or "p" into a canonical rational. Throws kFormat on bad
/// syntax or a zero denominator.
Rational parse_rational(std::string_view text);

/// Interprets a correlation written as "p/q" or a decimal number.
template <NumericField T>
T correlation_from_string(std::string_view text);

template <NumericField T>
T half() {
  return Field<T>::from_ratio(1, 2);
}

/// (1 + sign * rho) / 2: probability that an edge keeps (+1) or flips (-1).
template <NumericField T>
T edge_transition(const T& rho, int sign) {
  T one = Field<T>::from_ratio(1, 1);
  T r = rho;
  return sign > 0 ? T((one + r) / 2) : T((one - r) / 2);
}

}  // namespace ift
