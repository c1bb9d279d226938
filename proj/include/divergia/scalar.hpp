#pragma once

// Two numeric backends share every algorithm in the library:
//
//   double    binary floating point, comparisons with absolute tolerance 1e-12
//   Rational  arbitrary precision p/q (GMP), comparisons exact
//
// Every set, function and map is homogeneous in one backend; the helpers below
// are the only place where the two differ.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace divergia {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Absolute comparison tolerance of the floating backend.
inline constexpr double kTolerance = 1e-12;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr std::string_view name = "float";
  static double tolerance() { return kTolerance; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr std::string_view name = "exact";
  static Rational tolerance() { return Rational(0); }
};

template <class T>
concept Scalar = requires {
  { ScalarTraits<T>::exact } -> std::convertible_to<bool>;
};

/// a == b (within tolerance on the floating backend).
template <Scalar T>
bool approx_eq(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    return std::abs(a - b) <= kTolerance;
  }
}

/// a < b by more than the tolerance.
template <Scalar T>
bool definitely_less(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a < b;
  } else {
    return a < b - kTolerance;
  }
}

/// a <= b up to the tolerance.
template <Scalar T>
bool approx_le(const T& a, const T& b) {
  return !definitely_less(b, a);
}

double to_double(double x);
double to_double(const Rational& x);

/// Exact conversion from a binary double (every finite double is a dyadic rational).
template <Scalar T>
T from_double(double x) {
  if constexpr (ScalarTraits<T>::exact) {
    return Rational(x);
  } else {
    return x;
  }
}

template <Scalar T>
T from_int(std::int64_t x) {
  return T(x);
}

/// "p/q" for rationals, shortest round-tripping decimal for doubles.
std::string to_string(double x);
std::string to_string(const Rational& x);

/// Accepts "p/q", integers and decimals ("0.125" is parsed exactly on the rational backend).
template <Scalar T>
T parse_scalar(std::string_view text);
template <>
double parse_scalar<double>(std::string_view text);
template <>
Rational parse_scalar<Rational>(std::string_view text);

/// base^e for integer e (negative allowed), exact on the rational backend.
template <Scalar T>
T pow_int(const T& base, std::int64_t e);
extern template double pow_int<double>(const double&, std::int64_t);
extern template Rational pow_int<Rational>(const Rational&, std::int64_t);

/// floor(x) as a 64-bit integer; x must fit.
std::int64_t floor_int(double x);
std::int64_t floor_int(const Rational& x);

/// True when x is an integer (exactly, or within 1e-12 for doubles).
bool is_integral(double x);
bool is_integral(const Rational& x);

}  // namespace divergia
