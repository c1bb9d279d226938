#pragma once

// Neighbourhoods of rationals with denominator q on I = [0, 1]:
//
//   Y_{q,α} = { x : ||qx|| <= q^(1-α) }            = ∪_p [p/q - q^-α, p/q + q^-α]
//   Z_{q,α} = { x : ||qx|| <= (q+1)/q · q^(1-α) }  = same with radius (q+1) q^(-α-1)
//
// and the two families built from bumps on them.

#include "divergia/funcs.hpp"
#include "divergia/intervals.hpp"
#include "divergia/scalar.hpp"

#include <cstddef>
#include <cstdint>

namespace divergia {

/// ParameterError unless α > 2. On the exact backend α must be an integer.
template <Scalar T>
IntervalUnion<T> y_set(std::uint64_t q, const T& alpha);

template <Scalar T>
IntervalUnion<T> z_set(std::uint64_t q, const T& alpha);

/// Radius q^-α of the Y neighbourhoods.
template <Scalar T>
T y_radius(std::uint64_t q, const T& alpha);

/// Radius (q+1) q^(-α-1) of the Z neighbourhoods.
template <Scalar T>
T z_radius(std::uint64_t q, const T& alpha);

template <Scalar T>
struct JarnikParams {
  double theta;
  T alpha0;  // 2 / theta
  std::size_t q_max;

  /// theta ∈ (0, 1); on the exact backend 2/theta must be an integer.
  static JarnikParams make(double theta, std::size_t q_max = 100);
};

/// r_n = Σ_{q=1}^{n} bump_from_sets(Z_{q,α0}, Y_{q,α0}). UsageError for n > q_max.
template <Scalar T>
FunctionFamily<T> jarnik_family(const JarnikParams<T>& p);

/// Bumps at every rational p/q with width ρ_q = q^-max(3, ln q) and height 1/ρ_q.
/// The widths shrink faster than any power of q, so the divergence set lies in
/// every Q_α; each level still adds about 1.5 per rational to the integral.
struct LiouvilleParams {
  std::size_t q_max = 100;

  /// Largest level with a width the floating backend resolves (ρ_q >= ~1e-11).
  static constexpr std::size_t kMaxLevel = 150;

  static double width(std::size_t q);
  static double height(std::size_t q);
};

/// g_q: height h_q on [p/q - ρ_q/2, p/q + ρ_q/2], support radius ρ_q, clipped to [0,1].
PiecewiseLinear<double> liouville_level(std::size_t q);

/// z_n = Σ_{q=1}^{n} g_q. UsageError for n > q_max; ParameterError if q_max > kMaxLevel.
FunctionFamily<double> liouville_family(const LiouvilleParams& p = {});

#define DIVERGIA_JARNIK_EXTERN(T)                                          \
  extern template IntervalUnion<T> y_set(std::uint64_t, const T&);         \
  extern template IntervalUnion<T> z_set(std::uint64_t, const T&);         \
  extern template T y_radius(std::uint64_t, const T&);                     \
  extern template T z_radius(std::uint64_t, const T&);                     \
  extern template struct JarnikParams<T>;                                  \
  extern template FunctionFamily<T> jarnik_family(const JarnikParams<T>&);

DIVERGIA_JARNIK_EXTERN(double)
DIVERGIA_JARNIK_EXTERN(Rational)
#undef DIVERGIA_JARNIK_EXTERN

}  // namespace divergia
